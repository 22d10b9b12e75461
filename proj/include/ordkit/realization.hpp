#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ordkit/groups.hpp"
#include "ordkit/orders.hpp"
#include "ordkit/quadratic.hpp"

namespace ordkit {

/// Finite piece of the dynamical realization of an ordering: an enumeration
/// g_0 = id, g_1, ... and exact positions t(g_i) on the line with
/// t(g) < t(h) iff g < h. Copies share the table.
class Realization {
 public:
  /// Takes an already computed table. Checks shapes and distinctness of the
  /// enumeration, not the order invariants (see verify_realization).
  Realization(Ordering source, std::vector<Element> enumeration, std::vector<Rational> t);

  const Ordering& source() const { return data_->source; }
  const Group& group() const { return data_->source.group(); }
  std::size_t size() const { return data_->enumeration.size(); }
  const std::vector<Element>& enumeration() const { return data_->enumeration; }
  const Element& element(std::size_t i) const { return data_->enumeration[i]; }
  const Rational& t(std::size_t i) const { return data_->t[i]; }
  std::optional<std::size_t> index_of(const Element& g) const { return data_->table.find(g); }

  /// Enumeration indices sorted by t.
  const std::vector<std::size_t>& by_position() const { return data_->sorted; }
  /// Rank of element i in the t-order.
  std::size_t position(std::size_t i) const { return data_->rank[i]; }
  /// t of the element at rank p.
  const Rational& grid(std::size_t p) const { return data_->t[data_->sorted[p]]; }

 private:
  struct Data {
    Ordering source;
    std::vector<Element> enumeration;
    std::vector<Rational> t;
    ElementTable table;
    std::vector<std::size_t> sorted;
    std::vector<std::size_t> rank;
  };
  std::shared_ptr<const Data> data_;
};

/// Realization of the first n elements of the shortlex enumeration.
Realization build_realization(const Ordering& o, std::size_t n);
/// Realization along a caller-provided enumeration (must start at the
/// identity and be repetition free; DomainError otherwise).
Realization build_realization(const Ordering& o, std::vector<Element> enumeration);

/// First violated invariant (t(id) = 0, distinct t, t order preserving on
/// every pair, grid equivariance on up to `equivariance_samples` elements), or
/// nullopt when everything holds.
std::optional<std::string> verify_realization(const Realization& r,
                                              std::size_t equivariance_samples = 64);

/// Piecewise-linear action of g at x: g(t(h)) = t(gh) on the grid, affine in
/// between, translation by the boundary offset past the extremes. DomainError
/// when a needed product gh leaves the realized prefix.
Rational evaluate_action(const Realization& r, const Element& g, const Rational& x);

/// sign(g) = + iff g(t(id)) > t(id), read off the table. Defined on the
/// prefix only; other elements raise DomainError.
Ordering recover_order(const Realization& r);

/// image[i][p]: rank of g_i h_p where h_p is the element at rank p, or -1 when
/// the product is outside the prefix. Rows cover the first `rows` elements.
struct ActionTable {
  std::vector<std::vector<std::int32_t>> image;
};
ActionTable action_table(const Realization& r, std::size_t rows);

enum class CrossingKind { kCrossed, kTransversal };
std::string to_string(CrossingKind k);

/// Sign of g(x) - x at the grid point x = t(h) of rank p. Equals the sign of
/// h^-1 g h, so it is decided by the source order even when gh is not
/// realized. 0 only for the identity.
int displacement_sign(const Realization& r, const Element& g, std::size_t rank);

/// Grid-level witness. A fixed point "in segment p" means the displacement
/// changes sign between the grid points of rank p and p+1.
///  transversal: f has a fixed point a in segment a_rank with f(x) > x at
///    rank a_rank and f(x) < x at ranks a_rank+1 .. b_rank+1; g has a fixed
///    point b in segment b_rank with g(x) > x at ranks a_rank .. b_rank and
///    g(x) < x at rank b_rank+1.
///  crossed: f has fixed points in segments a_rank < b_rank and keeps one
///    sign on the grid between them; g sends the whole segment a_rank (or
///    b_rank) into [x_{a_rank+1}, x_{b_rank}], so g moves a (or b) into ]a,b[.
struct CrossingWitness {
  CrossingKind kind;
  std::size_t f_index;
  std::size_t g_index;
  Element f;
  Element g;
  std::size_t a_rank;
  std::size_t b_rank;
  bool moves_b{false};  // crossed only: which fixed point g pushes inside
  /// a lies in ]a_low, a_high[, b in ]b_low, b_high[ (grid values).
  Rational a_low, a_high, b_low, b_high;
};

struct CrossingSearch {
  std::optional<CrossingWitness> witness;
  std::size_t pairs_examined{0};
  /// True when the pair budget ran out before the search finished.
  bool budget_exhausted{false};
};

constexpr std::size_t kDefaultCrossingBudget = 50'000'000;

/// Scans element pairs of the prefix for a transversal pattern, then for a
/// crossed one. Lowest (f, g) index pair wins. Sound at grid resolution only;
/// "none" is not a proof.
CrossingSearch detect_crossing(const Realization& r, std::size_t budget = kDefaultCrossingBudget);

/// Replays a witness from scratch against the source order.
bool recheck_crossing(const Realization& r, const CrossingWitness& w);

/// g with grid points x, y where g(x) > x and g(y) < y.
struct AlmostFreeWitness {
  Element g;
  Rational x;
  Rational y;
};
/// Checks the first `samples` elements of the enumeration (all when 0).
std::optional<AlmostFreeWitness> check_almost_free(const Realization& r, std::size_t samples = 0);

struct HolderResult {
  std::vector<std::int64_t> q;  // q[p-1] = q(p)
  std::vector<Rational> ratios;  // q(p)/p
  Rational bracket_width;        // 1/P
};

/// For p = 1..pmax the integer q(p) with f^q <= g^p < f^(q+1), found by exact
/// galloping search. DomainError if f is not positive or if |q| passes
/// `exponent_bound` (the ordering is not Archimedean on <f, g>).
HolderResult holder_embedding(const Ordering& o, const Element& f, const Element& g, std::int64_t pmax,
                              std::int64_t exponent_bound = std::int64_t{1} << 40);

}  // namespace ordkit
