#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ordkit/groups.hpp"
#include "ordkit/quadratic.hpp"

namespace ordkit {

enum class Sign { kNegative = -1, kPositive = 1 };
enum class Comparison { kLess = -1, kEqual = 0, kGreater = 1 };

inline Sign operator-(Sign s) { return s == Sign::kPositive ? Sign::kNegative : Sign::kPositive; }
inline char sign_char(Sign s) { return s == Sign::kPositive ? '+' : '-'; }
std::string to_string(Comparison c);

/// Properties an ordering is known to have; used to pick which checks apply.
enum class Property : std::uint8_t {
  kLeftInvariant = 1,
  kBiInvariant = 2,
  kConradian = 4,
  kArchimedean = 8,
  kRightRecurrent = 16,
};
using PropertySet = std::uint8_t;

constexpr PropertySet operator|(Property a, Property b) {
  return static_cast<PropertySet>(static_cast<PropertySet>(a) | static_cast<PropertySet>(b));
}
constexpr PropertySet operator|(PropertySet a, Property b) {
  return static_cast<PropertySet>(a | static_cast<PropertySet>(b));
}

/// Sign function of a concrete ordering. evaluate() returns +1 / -1 on
/// nonidentity elements and 0 on the identity.
class OrderImpl {
 public:
  virtual ~OrderImpl() = default;
  virtual int evaluate(const Element& g) const = 0;
};

/// A left-invariant total order presented by its sign function. Immutable;
/// copies share the underlying oracle.
class Ordering {
 public:
  Ordering(Group group, std::shared_ptr<const OrderImpl> impl, std::string description,
           PropertySet properties);

  const Group& group() const { return group_; }
  const std::string& description() const { return description_; }
  PropertySet properties() const { return properties_; }
  bool claims(Property p) const { return (properties_ & static_cast<PropertySet>(p)) != 0; }

  /// Sign of a nonidentity element; DomainError on the identity.
  Sign sign(const Element& g) const;
  /// +1, -1, or 0 for the identity.
  int evaluate(const Element& g) const;
  /// g < h iff sign(g^-1 h) = +.
  Comparison compare(const Element& g, const Element& h) const;

  const std::shared_ptr<const OrderImpl>& impl() const { return impl_; }

 private:
  Group group_;
  std::shared_ptr<const OrderImpl> impl_;
  std::string description_;
  PropertySet properties_;
};

// -- operators on orderings --------------------------------------------------

/// The image of o under f: positive cone f P+ f^-1, i.e. sign(g) = o.sign(f^-1 g f).
Ordering conjugate_order(const Ordering& o, const Element& f);
/// Pointwise negated sign.
Ordering reverse_order(const Ordering& o);

/// Membership predicate for a subgroup, with a name for reports.
struct Subgroup {
  std::string name;
  std::function<bool(const Element&)> contains;
};

/// Positive cone (P+_outer \ member) u P+_inner. The caller asserts that the
/// subgroup is convex for `outer` (see find_convexity_violation).
Ordering extend_order(const Ordering& outer, Subgroup member, const Ordering& inner);

// -- concrete families -------------------------------------------------------

/// Orders Z^n by the sign of <slope, v>, falling back to a lexicographic
/// comparison when the pairing vanishes. `tiebreak` lists 1-based coordinates,
/// negated to reverse that coordinate; unlisted coordinates follow in order.
Ordering zn_order(int n, std::vector<QuadraticNumber> slope, std::vector<int> tiebreak = {});
Ordering zn_lex(int n);
/// Parameters of an order built by zn_order (tiebreak completed to all
/// coordinates); nullopt for anything else, including its conjugates.
struct ZnSlopeParams {
  std::vector<QuadraticNumber> slope;
  std::vector<int> tiebreak;
};
std::optional<ZnSlopeParams> zn_slope_params(const Ordering& o);
/// Smirnov's ordering of the affine group: (b, a) positive iff b + eps*a > 1.
Ordering smirnov_order(const QuadraticNumber& eps);
/// Magnus ordering of F_k via x_i -> 1 + X_i in noncommuting power series.
Ordering magnus_order(int rank);
/// Klein-bottle group orders: sign(b^n a^m) = s_b sign(n) if n != 0, else s_a sign(m).
Ordering klein_order(Sign s_b, Sign s_a);
/// All four orders, indexed (+,+), (+,-), (-,+), (-,-).
std::vector<Ordering> klein_orders();
Ordering dehornoy_order(int strands);
Ordering dd_order(int strands);

/// <s_j, ..., s_{n-1}> in B_n.
Subgroup parabolic_subgroup(int strands, int j);
/// <a> in the Klein-bottle group.
Subgroup klein_fiber();

/// Leading Magnus coefficient of a free word: the graded-lex smallest
/// monomial (as 1-based generator indices) with a nonzero coefficient in
/// mu(w) - 1, and that coefficient. Empty monomial for the identity.
struct MagnusTerm {
  std::vector<int> monomial;
  mpz_class coefficient;
};
MagnusTerm magnus_leading_term(const FreeWord& w);

// -- sampled diagnostics -----------------------------------------------------

/// x positive whose conjugate f^-1 x f is negative (so right multiplication by
/// f breaks the order).
struct BiInvarianceWitness {
  Element positive;
  Element conjugator;
};
std::optional<BiInvarianceWitness> find_bi_invariance_violation(const Ordering& o,
                                                                const std::vector<Element>& samples);

/// f < h < g with f, g in the subgroup and h outside it.
struct ConvexityViolation {
  Element low;
  Element between;
  Element high;
};
std::optional<ConvexityViolation> find_convexity_violation(const Ordering& o, const Subgroup& member,
                                                           const std::vector<Element>& samples);

/// First nonidentity candidate with different signs under o1 and o2.
std::optional<Element> find_discriminator(const Ordering& o1, const Ordering& o2,
                                          const std::vector<Element>& candidates);

// -- text specs --------------------------------------------------------------

/// Parses specs such as "dehornoy:b3", "dd:b4", "zn:lex:2", "zn:slope:1,sqrt2",
/// "smirnov:sqrt2-1", "magnus:f2", "klein:+-", with modifiers "!reverse",
/// "!conj=<word>" and a final "!extend=<subgroup>:<inner spec>".
Ordering parse_order_spec(std::string_view spec);
/// Subgroup names accepted by "!extend=": "parabolic<j>" (braids), "fiber" (Klein <a>).
Subgroup parse_subgroup(const Group& group, std::string_view name);

}  // namespace ordkit
