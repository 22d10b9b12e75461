#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordkit/groups.hpp"

namespace ordkit::braid {

constexpr std::size_t kDefaultStepCap = 1'000'000;

/// Process-wide default for the handle-reduction step cap (ORDKIT_STEP_CAP).
std::size_t default_step_cap();
void set_default_step_cap(std::size_t cap);

/// Dehornoy handle reduction. A sigma_i-handle is a subword
/// s_i^e v s_i^-e where v only uses s_j with j > i. The handle that closes
/// leftmost is reduced first; it never contains a nested s_{i+1}-handle, so
/// every s_{i+1} letter inside shares one exponent d and the rewrite is
///   s_i^e v s_i^-e  ->  v with each s_{i+1}^d replaced by s_{i+1}^-e s_i^d s_{i+1}^e.
/// The result is empty, or s_i-positive / s_i-negative for its lowest index i.
/// Throws ResourceError when more than `step_cap` reductions are needed.
BraidWord handle_reduce(const BraidWord& w, std::size_t step_cap = default_step_cap());

enum class BraidSign { kNegative = -1, kIdentity = 0, kPositive = 1 };

std::string to_string(BraidSign s);

struct DehornoySign {
  BraidSign value{BraidSign::kIdentity};
  /// Lowest generator index of the reduced word; empty for the identity.
  std::optional<int> witness_index;
  BraidWord reduced;
};

DehornoySign dehornoy_sign(const BraidWord& w);

/// True iff w1 and w2 denote the same braid (w1 w2^-1 reduces to the empty word).
bool braid_equal(const BraidWord& w1, const BraidWord& w2);

struct ParabolicMembership {
  bool member{false};
  /// On membership: a word equal to w that only uses s_j, ..., s_{n-1}.
  std::optional<BraidWord> rewriting;
};

/// Decides w in <s_j, ..., s_{n-1}>, 1 <= j <= n-1.
ParabolicMembership parabolic_membership(const BraidWord& w, int j);

/// Dubrovina-Dubrovin sign: the Dehornoy sign at the lowest index i of the
/// reduced word, reversed when i - 1 is odd (one reversal per level of the
/// parabolic chain s_1 > s_2 > ...).
BraidSign dd_sign(const BraidWord& w);

/// Generators u_1, ..., u_{n-1} of the DD positive cone: v_i = s_i s_{i+1} ... s_{n-1}
/// and u_i = v_i^{(-1)^{i-1}}.
struct ConeSpec {
  int strands;
  std::vector<BraidWord> generators;
};

ConeSpec dd_cone(int strands);

/// Braid denoted by a positive word in the cone generators (letters 1-based).
BraidWord cone_word_to_braid(const ConeSpec& cone, const std::vector<int>& u_word);

/// Rewrites a DD-positive braid of B_3 as a positive word over {u_1, u_2}
/// (returned as a sequence of indices 1, 2). Throws DomainError when w is
/// not DD-positive or lives outside B_3.
std::vector<int> dd_cone_rewrite(const BraidWord& w, std::size_t step_cap = default_step_cap());

/// s_i -> s_{i+offset}, landing in B_strands.
BraidWord shift(const BraidWord& w, int offset, int strands);

/// Hash of the (unreduced) Burau matrix evaluated at fixed points mod a prime.
/// Equal braids have equal fingerprints.
std::uint64_t burau_fingerprint(const BraidWord& w);

/// Mutation-testing hook: when enabled, handle reduction drops the
/// s_{i+1} conjugation of the rewrite rule. Never enable outside tests.
namespace fault {
void inject_handle_reduction_fault(bool enabled);
bool handle_reduction_fault();
}  // namespace fault

}  // namespace ordkit::braid
