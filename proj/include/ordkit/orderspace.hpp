#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordkit/groups.hpp"
#include "ordkit/orders.hpp"

namespace ordkit {

// ---------------------------------------------------------------------------
// Ball restrictions and the ultrametric
// ---------------------------------------------------------------------------

/// Sign table of an ordering on the nonidentity elements of a generator ball
/// (shortlex order).
struct BallRestriction {
  Group group;
  int radius;
  std::vector<Element> elements;
  std::vector<Sign> signs;

  std::optional<Sign> sign_of(const Element& g) const;
};

BallRestriction restrict_to_ball(const Ordering& o, int radius, std::size_t cap = kDefaultBallCap);

/// Index of the first element where the tables differ (same group, same
/// radius required).
std::optional<std::size_t> first_difference(const BallRestriction& a, const BallRestriction& b);

/// First violation of the cone axioms inside the table: a description, or
/// nullopt.
std::optional<std::string> check_restriction_axioms(const BallRestriction& r);

struct Distance {
  /// Largest n <= max_radius with equal restrictions on the radius-n ball.
  int n_prime{0};
  int max_radius{0};
  /// The orders agree on the whole radius-max_radius ball.
  bool agree_through_max{false};
  /// First element (shortlex) where they differ, when they do.
  std::optional<Element> discriminator;

  /// "1", "e^-n", or "<= e^-max".
  std::string text() const;
  /// e^-n', or e^-max when they agree through max_radius.
  double value() const;
};

Distance order_distance(const Ordering& a, const Ordering& b, int max_radius,
                        std::size_t cap = kDefaultBallCap);

// ---------------------------------------------------------------------------
// Consistency search
// ---------------------------------------------------------------------------

enum class ClosureMode { kLeft, kBi, kConrad };
std::string to_string(ClosureMode m);
ClosureMode parse_closure_mode(const std::string& s);

enum class SearchStatus { kConsistent, kInconsistent, kUnknown };
std::string to_string(SearchStatus s);

/// One step of a cone derivation. Operands index earlier steps.
///   seed:          a chosen positive element
///   product:       x y
///   conjugate:     y x y^-1
///   conjugate_inv: y^-1 x y
///   conrad:        y^-1 x y^2
struct DerivationStep {
  enum class Rule { kSeed, kProduct, kConjugate, kConjugateInverse, kConrad };
  Rule rule;
  int x{-1};
  int y{-1};
  Element result;
};
std::string to_string(DerivationStep::Rule r);

/// Derivation ending in a contradiction: steps[clash_a] is the identity
/// (clash_b < 0) or the inverse of steps[clash_b].
struct Certificate {
  std::vector<DerivationStep> steps;
  int clash_a{-1};
  int clash_b{-1};
};

/// Recomputes every step from its operands and checks the final clash.
bool replay_certificate(const Group& group, const Certificate& c);

struct SearchOptions {
  ClosureMode mode{ClosureMode::kLeft};
  /// Saturation rounds.
  int depth{6};
  /// Closure region radius; negative means 3 * radius, clamped so the region
  /// stays under region_cap elements.
  int region_radius{-1};
  std::size_t region_cap{1500};
  /// Search nodes before giving up with status unknown.
  std::size_t node_budget{200000};
  /// Survivors kept; the search stops (status consistent) past this many.
  std::size_t max_assignments{4096};
  /// Elimination certificates kept.
  std::size_t max_certificates{16};
};

struct SearchVerdict {
  SearchStatus status{SearchStatus::kUnknown};
  Group group;
  int radius{0};
  int region_radius{0};
  std::size_t region_size{0};
  /// Nonidentity ball elements, shortlex.
  std::vector<Element> elements;
  /// Surviving sign tables over `elements`.
  std::vector<std::vector<Sign>> assignments;
  std::size_t eliminated{0};
  std::size_t nodes{0};
  std::vector<Certificate> certificates;
  /// Set when status is unknown.
  std::string reason;

  BallRestriction restriction(std::size_t i) const;
};

/// Enumerates every sign table on the radius ball that survives
/// depth-bounded saturation of the mode's closure rules. `fixed` pins signs
/// of some elements (they need not lie in the ball). Sound for elimination;
/// survivors are only consistent at the given depth.
SearchVerdict consistent_extensions(const Group& group, int radius,
                                    const std::vector<std::pair<Element, Sign>>& fixed,
                                    const SearchOptions& options = {});

// ---------------------------------------------------------------------------
// Isolation probe
// ---------------------------------------------------------------------------

struct ProbeOptions {
  int depth{6};
  /// Conjugators are taken from this ball.
  int conjugator_radius{3};
  /// Discriminators are looked for up to this radius beyond the probe radius.
  int discriminator_slack{4};
  /// Largest denominator exponent tried for slope perturbations (delta = 2^-k).
  int max_perturbation_exponent{40};
  SearchOptions search{};
};

struct ProbeResult {
  enum class Kind { kRealized, kUnrealized, kNone };
  Kind kind{Kind::kNone};
  /// "slope-perturbation", "conjugation", "reverse-extension", "consistency-search".
  std::string method;
  /// Realized alternatives.
  std::optional<Ordering> alternative;
  std::optional<Element> discriminator;
  /// Unrealized alternatives: a consistent table on the radius+1 ball that
  /// agrees with the order on the radius ball.
  std::optional<BallRestriction> table;
  std::string note;
};
std::string to_string(ProbeResult::Kind k);

/// Looks for an ordering different from o that agrees with o on the radius
/// ball.
ProbeResult isolated_probe(const Ordering& o, int radius, const ProbeOptions& options = {});

// ---------------------------------------------------------------------------
// Conrad-type diagnostics
// ---------------------------------------------------------------------------

struct PairWitness {
  Element f;
  Element g;
};

/// For positive f, g among the samples: g^-1 f g^2 must be positive in a
/// Conradian order. Returns the first (f, g) where it is not.
std::optional<PairWitness> conrad_check(const Ordering& o, const std::vector<Element>& samples);

/// Exponent pairs (m_i, n_i) of W(f, g) = f^m1 g^n1 ... f^mk g^nk.
using WordPattern = std::vector<std::pair<long, long>>;
/// f^-1 g^-2 f^2 g^3.
WordPattern dehornoy_pattern();
std::string format_pattern(const WordPattern& w);
Element evaluate_pattern(const Group& group, const Element& f, const Element& g, const WordPattern& w);

/// Sign of W(f, g). DomainError unless f, g are positive and both exponent
/// sums are positive.
Sign positive_word_check(const Ordering& o, const Element& f, const Element& g, const WordPattern& w);

struct RecurrenceSuspect {
  Element f;
  Element g;
  int nmax;
};
/// For positive f, g among the samples looks for n <= nmax with
/// f^-n g f^n positive. Pairs without one are suspects, not proofs.
std::optional<RecurrenceSuspect> right_recurrence_check(const Ordering& o, const std::vector<Element>& samples,
                                                        int nmax);

// ---------------------------------------------------------------------------
// Conjugate convergence
// ---------------------------------------------------------------------------

struct ConjugateStep {
  int m;
  Element conjugator;
  int agreement_radius;
  Element discriminator;
  int discriminator_length;
};

struct ConvergenceReport {
  std::vector<ConjugateStep> steps;
  /// Target radius reached for every m.
  bool reached_target{false};
  /// Every conjugator in the ball agreed with the reference on the whole table.
  bool fixed_point{false};
  std::size_t conjugators_examined{0};
  int table_radius{0};
};

/// For m = 1..target, the shortlex-first conjugator g of length <= R whose
/// conjugate conjugate_order(o, g) agrees with `reference` on a ball of radius
/// >= max(m, previous + 1) and differs from it inside the table radius.
ConvergenceReport conjugate_convergence(const Ordering& o, const Ordering& reference, int conjugator_radius,
                                        int target, int table_radius = -1);
/// Reference = o.
ConvergenceReport conjugate_convergence(const Ordering& o, int conjugator_radius, int target,
                                        int table_radius = -1);

// ---------------------------------------------------------------------------
// Conradian soul of braid orders
// ---------------------------------------------------------------------------

struct SoulLevel {
  int j;  // subgroup <s_j, ..., s_{n-1}>
  bool conradian_on_samples;
  std::size_t samples;
};

struct SoulResult {
  int strands;
  std::string order;
  /// The soul is <s_j, ..., s_{n-1}>; j = n means the trivial subgroup.
  int j;
  std::vector<SoulLevel> levels;
  /// Kills level j - 1.
  std::optional<PairWitness> witness;
  std::string witness_kind;  // "positive-word" or "conrad"
  WordPattern pattern;
  Element witness_value;
};

/// Walks the convex chain <s_{n-1}> < <s_{n-2}, s_{n-1}> < ... < B_n and
/// stops at the first level with a Conrad violation among sampled elements
/// (`sample_radius` in that level's generators). which = "dehornoy" or "dd".
SoulResult conradian_soul_braid(int strands, const std::string& which, int sample_radius = 3);

}  // namespace ordkit
