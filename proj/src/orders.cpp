#include "ordkit/orders.hpp"

#include <algorithm>
#include <map>

#include "ordkit/braid.hpp"
#include "ordkit/errors.hpp"

namespace ordkit {

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::kLess: return "<";
    case Comparison::kEqual: return "=";
    case Comparison::kGreater: return ">";
  }
  return "?";
}

Ordering::Ordering(Group group, std::shared_ptr<const OrderImpl> impl, std::string description,
                   PropertySet properties)
    : group_(std::move(group)),
      impl_(std::move(impl)),
      description_(std::move(description)),
      properties_(properties) {}

int Ordering::evaluate(const Element& g) const {
  if (!group_.contains(g)) {
    throw DomainError("element does not belong to the group of ordering " + description_);
  }
  return impl_->evaluate(g);
}

Sign Ordering::sign(const Element& g) const {
  int s = evaluate(g);
  if (s == 0) throw DomainError("sign of the identity is undefined (" + description_ + ")");
  return s > 0 ? Sign::kPositive : Sign::kNegative;
}

Comparison Ordering::compare(const Element& g, const Element& h) const {
  int s = evaluate(group_.multiply(group_.invert(g), h));
  if (s == 0) return Comparison::kEqual;
  return s > 0 ? Comparison::kLess : Comparison::kGreater;
}

namespace {

class ConjugateImpl : public OrderImpl {
 public:
  ConjugateImpl(Ordering base, Element f)
      : base_(std::move(base)), f_(std::move(f)), f_inv_(base_.group().invert(f_)) {}
  int evaluate(const Element& g) const override {
    const Group& G = base_.group();
    return base_.evaluate(G.multiply(G.multiply(f_inv_, g), f_));
  }

 private:
  Ordering base_;
  Element f_;
  Element f_inv_;
};

class ReverseImpl : public OrderImpl {
 public:
  explicit ReverseImpl(Ordering base) : base_(std::move(base)) {}
  int evaluate(const Element& g) const override { return -base_.evaluate(g); }

 private:
  Ordering base_;
};

class ExtendImpl : public OrderImpl {
 public:
  ExtendImpl(Ordering outer, Subgroup member, Ordering inner)
      : outer_(std::move(outer)), member_(std::move(member)), inner_(std::move(inner)) {}
  int evaluate(const Element& g) const override {
    return member_.contains(g) ? inner_.evaluate(g) : outer_.evaluate(g);
  }

 private:
  Ordering outer_;
  Subgroup member_;
  Ordering inner_;
};

class ZnImpl : public OrderImpl {
 public:
  ZnImpl(std::vector<QuadraticNumber> slope, std::vector<int> tiebreak)
      : slope_(std::move(slope)), tiebreak_(std::move(tiebreak)) {}
  const std::vector<QuadraticNumber>& slope() const { return slope_; }
  const std::vector<int>& tiebreak() const { return tiebreak_; }
  int evaluate(const Element& g) const override {
    const auto& c = std::get<ZnVector>(g).coords();
    QuadraticNumber pairing;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] != 0) pairing += slope_[i] * QuadraticNumber(Rational(mpz_class(std::to_string(c[i]))));
    }
    if (int s = pairing.sign(); s != 0) return s;
    for (int t : tiebreak_) {
      const std::int64_t x = c[static_cast<std::size_t>(std::abs(t) - 1)];
      if (x != 0) return (x > 0 ? 1 : -1) * (t > 0 ? 1 : -1);
    }
    return 0;
  }

 private:
  std::vector<QuadraticNumber> slope_;
  std::vector<int> tiebreak_;
};

class SmirnovImpl : public OrderImpl {
 public:
  explicit SmirnovImpl(QuadraticNumber eps) : eps_(std::move(eps)) {}
  int evaluate(const Element& g) const override {
    const auto& x = std::get<AffineElement>(g);
    return (QuadraticNumber(x.slope()) + eps_ * QuadraticNumber(x.offset()) - QuadraticNumber(1)).sign();
  }

 private:
  QuadraticNumber eps_;
};

class MagnusImpl : public OrderImpl {
 public:
  int evaluate(const Element& g) const override {
    const auto& w = std::get<FreeWord>(g);
    if (w.empty()) return 0;
    return sgn(magnus_leading_term(w).coefficient);
  }
};

class KleinImpl : public OrderImpl {
 public:
  KleinImpl(Sign s_b, Sign s_a) : s_b_(static_cast<int>(s_b)), s_a_(static_cast<int>(s_a)) {}
  int evaluate(const Element& g) const override {
    const auto& x = std::get<KleinElement>(g);
    if (x.b_exp != 0) return s_b_ * (x.b_exp > 0 ? 1 : -1);
    if (x.a_exp != 0) return s_a_ * (x.a_exp > 0 ? 1 : -1);
    return 0;
  }

 private:
  int s_b_;
  int s_a_;
};

class DehornoyImpl : public OrderImpl {
 public:
  int evaluate(const Element& g) const override {
    return static_cast<int>(braid::dehornoy_sign(std::get<BraidWord>(g)).value);
  }
};

class DDImpl : public OrderImpl {
 public:
  int evaluate(const Element& g) const override {
    return static_cast<int>(braid::dd_sign(std::get<BraidWord>(g)));
  }
};

// Graded-lex monomial order: shorter first, then lexicographic with x1 < x2 < ...
struct GradedLex {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

using Series = std::map<std::vector<int>, mpz_class, GradedLex>;

// (1 + X)^k truncated at degree `degree`, as coefficients of X^0..X^degree.
std::vector<mpz_class> binomial_series(long k, int degree) {
  std::vector<mpz_class> c(static_cast<std::size_t>(degree) + 1);
  c[0] = 1;
  for (int j = 1; j <= degree; ++j) {
    // c_j = c_{j-1} * (k - j + 1) / j
    c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] * (k - j + 1);
    mpz_divexact_ui(c[static_cast<std::size_t>(j)].get_mpz_t(), c[static_cast<std::size_t>(j)].get_mpz_t(),
                    static_cast<unsigned long>(j));
  }
  return c;
}

Series magnus_series(const FreeWord& w, int degree) {
  Series acc;
  acc[{}] = 1;
  for (const auto& l : w.letters()) {
    auto coeffs = binomial_series(l.exponent, degree);
    Series next;
    for (const auto& [mono, c] : acc) {
      for (int j = 0; j + static_cast<int>(mono.size()) <= degree; ++j) {
        const mpz_class& b = coeffs[static_cast<std::size_t>(j)];
        if (b == 0) continue;
        std::vector<int> m = mono;
        m.insert(m.end(), static_cast<std::size_t>(j), l.generator);
        mpz_class& slot = next[m];
        slot += c * b;
      }
    }
    for (auto it = next.begin(); it != next.end();) {
      it = it->second == 0 ? next.erase(it) : std::next(it);
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

MagnusTerm magnus_leading_term(const FreeWord& w) {
  if (w.empty()) return {};
  const int max_degree = static_cast<int>(w.length());
  for (int degree = 1; degree <= max_degree; ++degree) {
    Series s = magnus_series(w, degree);
    for (const auto& [mono, c] : s) {
      if (!mono.empty() && c != 0) return {mono, c};
    }
  }
  // Unreachable for reduced nonempty words: the Magnus map is injective and
  // a word of length L is separated from 1 at degree <= L.
  throw DomainError("Magnus expansion found no nonzero term");
}

Ordering conjugate_order(const Ordering& o, const Element& f) {
  const Group& G = o.group();
  if (!G.contains(f)) throw DomainError("conjugator does not belong to the group");
  PropertySet props = o.properties();
  return Ordering(G, std::make_shared<ConjugateImpl>(o, f),
                  o.description() + "!conj=" + G.format(f), props);
}

Ordering reverse_order(const Ordering& o) {
  return Ordering(o.group(), std::make_shared<ReverseImpl>(o), o.description() + "!reverse",
                  o.properties());
}

Ordering extend_order(const Ordering& outer, Subgroup member, const Ordering& inner) {
  if (!(outer.group() == inner.group())) throw DomainError("extend_order: groups differ");
  std::string desc = outer.description() + "!extend=" + member.name + ":" + inner.description();
  return Ordering(outer.group(), std::make_shared<ExtendImpl>(outer, std::move(member), inner),
                  std::move(desc), static_cast<PropertySet>(Property::kLeftInvariant));
}

Ordering zn_order(int n, std::vector<QuadraticNumber> slope, std::vector<int> tiebreak) {
  if (static_cast<int>(slope.size()) != n) throw DomainError("slope length must equal n");
  if (std::all_of(slope.begin(), slope.end(), [](const QuadraticNumber& q) { return q.sign() == 0; })) {
    throw DomainError("zn_order: slope must be nonzero");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int t : tiebreak) {
    if (t == 0 || std::abs(t) > n || seen[static_cast<std::size_t>(std::abs(t))]) {
      throw DomainError("zn_order: tiebreak must list distinct coordinates 1..n");
    }
    seen[static_cast<std::size_t>(std::abs(t))] = true;
  }
  for (int i = 1; i <= n; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) tiebreak.push_back(i);
  }
  std::string desc = "zn:slope:";
  for (std::size_t i = 0; i < slope.size(); ++i) desc += (i ? "," : "") + slope[i].to_string();
  desc += ":tb=";
  for (std::size_t i = 0; i < tiebreak.size(); ++i) desc += (i ? "," : "") + std::to_string(tiebreak[i]);
  // Irrational slopes (pairing never vanishes off 0) give Archimedean orders.
  bool archimedean = false;
  if (n == 1) {
    archimedean = true;
  } else if (n == 2) {
    const auto& s0 = slope[0];
    const auto& s1 = slope[1];
    archimedean = s0.sign() != 0 && s1.sign() != 0 && !(s1 / s0).is_rational();
  }
  PropertySet props = Property::kLeftInvariant | Property::kBiInvariant | Property::kConradian |
                      Property::kRightRecurrent;
  if (archimedean) props = props | Property::kArchimedean;
  return Ordering(Group::zn(n), std::make_shared<ZnImpl>(std::move(slope), std::move(tiebreak)),
                  std::move(desc), props);
}

std::optional<ZnSlopeParams> zn_slope_params(const Ordering& o) {
  const auto* z = dynamic_cast<const ZnImpl*>(o.impl().get());
  if (!z) return std::nullopt;
  return ZnSlopeParams{z->slope(), z->tiebreak()};
}

Ordering zn_lex(int n) {
  std::vector<QuadraticNumber> slope(static_cast<std::size_t>(n), QuadraticNumber(0));
  slope[0] = QuadraticNumber(1);
  Ordering o = zn_order(n, std::move(slope));
  return Ordering(o.group(), o.impl(), "zn:lex:" + std::to_string(n), o.properties());
}

Ordering smirnov_order(const QuadraticNumber& eps) {
  if (eps.is_rational()) throw DomainError("smirnov_order: epsilon must be irrational");
  return Ordering(Group::affine(), std::make_shared<SmirnovImpl>(eps), "smirnov:" + eps.to_string(),
                  static_cast<PropertySet>(Property::kLeftInvariant));
}

Ordering magnus_order(int rank) {
  return Ordering(Group::free(rank), std::make_shared<MagnusImpl>(), "magnus:f" + std::to_string(rank),
                  Property::kLeftInvariant | Property::kBiInvariant | Property::kConradian |
                      Property::kRightRecurrent);
}

Ordering klein_order(Sign s_b, Sign s_a) {
  std::string desc = std::string("klein:") + sign_char(s_b) + sign_char(s_a);
  return Ordering(Group::klein(), std::make_shared<KleinImpl>(s_b, s_a), std::move(desc),
                  Property::kLeftInvariant | Property::kConradian | Property::kRightRecurrent);
}

std::vector<Ordering> klein_orders() {
  return {klein_order(Sign::kPositive, Sign::kPositive), klein_order(Sign::kPositive, Sign::kNegative),
          klein_order(Sign::kNegative, Sign::kPositive), klein_order(Sign::kNegative, Sign::kNegative)};
}

Ordering dehornoy_order(int strands) {
  return Ordering(Group::braid(strands), std::make_shared<DehornoyImpl>(),
                  "dehornoy:b" + std::to_string(strands), static_cast<PropertySet>(Property::kLeftInvariant));
}

Ordering dd_order(int strands) {
  return Ordering(Group::braid(strands), std::make_shared<DDImpl>(), "dd:b" + std::to_string(strands),
                  static_cast<PropertySet>(Property::kLeftInvariant));
}

Subgroup parabolic_subgroup(int strands, int j) {
  if (j < 1 || j >= strands) throw DomainError("parabolic subgroup index out of range");
  return {"parabolic" + std::to_string(j), [strands, j](const Element& g) {
            const auto* w = std::get_if<BraidWord>(&g);
            if (!w || w->strands() != strands) return false;
            return braid::parabolic_membership(*w, j).member;
          }};
}

Subgroup klein_fiber() {
  return {"fiber", [](const Element& g) {
            const auto* x = std::get_if<KleinElement>(&g);
            return x && x->b_exp == 0;
          }};
}

std::optional<BiInvarianceWitness> find_bi_invariance_violation(const Ordering& o,
                                                                const std::vector<Element>& samples) {
  const Group& G = o.group();
  for (const auto& x : samples) {
    if (o.evaluate(x) <= 0) continue;
    for (const auto& f : samples) {
      if (o.evaluate(G.multiply(G.multiply(G.invert(f), x), f)) < 0) return BiInvarianceWitness{x, f};
    }
  }
  return std::nullopt;
}

std::optional<ConvexityViolation> find_convexity_violation(const Ordering& o, const Subgroup& member,
                                                           const std::vector<Element>& samples) {
  std::vector<const Element*> inside, outside;
  for (const auto& s : samples) (member.contains(s) ? inside : outside).push_back(&s);
  for (const auto* f : inside) {
    for (const auto* g : inside) {
      if (o.compare(*f, *g) != Comparison::kLess) continue;
      for (const auto* h : outside) {
        if (o.compare(*f, *h) == Comparison::kLess && o.compare(*h, *g) == Comparison::kLess) {
          return ConvexityViolation{*f, *h, *g};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Element> find_discriminator(const Ordering& o1, const Ordering& o2,
                                          const std::vector<Element>& candidates) {
  for (const auto& c : candidates) {
    int s1 = o1.evaluate(c);
    if (s1 != 0 && s1 != o2.evaluate(c)) return c;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Spec parsing

Subgroup parse_subgroup(const Group& group, std::string_view name) {
  std::string s(name);
  if (group.family() == Family::kBraid) {
    std::string digits;
    if (s.rfind("parabolic", 0) == 0) digits = s.substr(9);
    else if (s.size() > 1 && s[0] == 'p') digits = s.substr(1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      return parabolic_subgroup(group.rank(), std::stoi(digits));
    }
  }
  if (group.family() == Family::kKlein && (s == "fiber" || s == "a")) return klein_fiber();
  throw ParseError("unknown subgroup '" + s + "' for group " + group.name());
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Sign parse_sign_char(char c) {
  if (c == '+') return Sign::kPositive;
  if (c == '-') return Sign::kNegative;
  throw ParseError(std::string("expected '+' or '-', got '") + c + "'");
}

Ordering parse_base(const std::string& base) {
  auto parts = split_on(base, ':');
  const std::string& kind = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() < n) throw ParseError("incomplete order spec '" + base + "'");
  };
  auto braid_group = [&](const std::string& g) {
    Group G = parse_group(g);
    if (G.family() != Family::kBraid) throw ParseError("expected a braid group in '" + base + "'");
    return G.rank();
  };
  if (kind == "dehornoy") {
    need(2);
    return dehornoy_order(braid_group(parts[1]));
  }
  if (kind == "dd") {
    need(2);
    return dd_order(braid_group(parts[1]));
  }
  if (kind == "zn") {
    need(3);
    if (parts[1] == "lex") {
      try {
        return zn_lex(std::stoi(parts[2]));
      } catch (const std::logic_error&) {
        throw ParseError("malformed dimension in '" + base + "'");
      }
    }
    if (parts[1] == "slope") {
      std::vector<QuadraticNumber> slope;
      for (const auto& c : split_on(parts[2], ',')) slope.push_back(QuadraticNumber::parse(c));
      std::vector<int> tiebreak;
      if (parts.size() > 3) {
        if (parts[3].rfind("tb=", 0) != 0) throw ParseError("expected tb=... in '" + base + "'");
        for (const auto& c : split_on(parts[3].substr(3), ',')) {
          try {
            tiebreak.push_back(std::stoi(c));
          } catch (const std::logic_error&) {
            throw ParseError("malformed tiebreak in '" + base + "'");
          }
        }
      }
      const int n = static_cast<int>(slope.size());
      return zn_order(n, std::move(slope), std::move(tiebreak));
    }
    throw ParseError("unknown Z^n order '" + base + "'");
  }
  if (kind == "smirnov") {
    need(2);
    return smirnov_order(QuadraticNumber::parse(parts[1]));
  }
  if (kind == "magnus") {
    need(2);
    Group G = parse_group(parts[1]);
    if (G.family() != Family::kFree) throw ParseError("magnus orders need a free group");
    return magnus_order(G.rank());
  }
  if (kind == "klein") {
    need(2);
    if (parts[1].size() != 2) throw ParseError("klein order needs two signs, e.g. klein:+-");
    return klein_order(parse_sign_char(parts[1][0]), parse_sign_char(parts[1][1]));
  }
  throw ParseError("unknown order family '" + kind + "'");
}

}  // namespace

Ordering parse_order_spec(std::string_view spec) {
  std::string s(spec);
  auto bang = s.find('!');
  Ordering o = parse_base(s.substr(0, bang));
  while (bang != std::string::npos) {
    std::size_t next = s.find('!', bang + 1);
    std::string mod = s.substr(bang + 1, next == std::string::npos ? std::string::npos : next - bang - 1);
    if (mod == "reverse") {
      o = reverse_order(o);
    } else if (mod.rfind("conj=", 0) == 0) {
      o = conjugate_order(o, o.group().parse(mod.substr(5)));
    } else if (mod.rfind("extend=", 0) == 0) {
      // The inner spec runs to the end of the string.
      std::string rest = s.substr(bang + 1 + 7);
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError("expected extend=<subgroup>:<inner spec>");
      Subgroup member = parse_subgroup(o.group(), rest.substr(0, colon));
      Ordering inner = parse_order_spec(rest.substr(colon + 1));
      return extend_order(o, std::move(member), inner);
    } else {
      throw ParseError("unknown order modifier '!" + mod + "'");
    }
    bang = next;
  }
  return o;
}

}  // namespace ordkit
