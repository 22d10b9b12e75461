#include "ordkit/orderspace.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ordkit/braid.hpp"
#include "ordkit/errors.hpp"

namespace ordkit {

// ---------------------------------------------------------------------------
// Restrictions and distance

std::optional<Sign> BallRestriction::sign_of(const Element& g) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (group.equal(elements[i], g)) return signs[i];
  }
  return std::nullopt;
}

BallRestriction restrict_to_ball(const Ordering& o, int radius, std::size_t cap) {
  Ball b(o.group(), radius, cap);
  BallRestriction out{o.group(), radius, {}, {}};
  for (std::size_t i = 1; i < b.size(); ++i) {
    out.elements.push_back(b[i]);
    out.signs.push_back(o.sign(b[i]));
  }
  return out;
}

std::optional<std::size_t> first_difference(const BallRestriction& a, const BallRestriction& b) {
  if (!(a.group == b.group) || a.elements.size() != b.elements.size()) {
    throw DomainError("restrictions are over different balls");
  }
  for (std::size_t i = 0; i < a.signs.size(); ++i) {
    if (a.signs[i] != b.signs[i]) return i;
  }
  return std::nullopt;
}

std::optional<std::string> check_restriction_axioms(const BallRestriction& r) {
  const Group& G = r.group;
  ElementTable table(G);
  for (const auto& e : r.elements) table.insert(e);
  for (std::size_t i = 0; i < r.elements.size(); ++i) {
    auto j = table.find(G.invert(r.elements[i]));
    if (j && r.signs[*j] == r.signs[i]) return "g and g^-1 share a sign: " + G.format(r.elements[i]);
  }
  for (std::size_t i = 0; i < r.elements.size(); ++i) {
    if (r.signs[i] != Sign::kPositive) continue;
    for (std::size_t j = 0; j < r.elements.size(); ++j) {
      if (r.signs[j] != Sign::kPositive) continue;
      Element p = G.multiply(r.elements[i], r.elements[j]);
      if (G.is_identity(p)) return "product of positives is the identity";
      auto k = table.find(p);
      if (k && r.signs[*k] != Sign::kPositive) {
        return "positive cone not closed: " + G.format(r.elements[i]) + " * " + G.format(r.elements[j]);
      }
    }
  }
  return std::nullopt;
}

std::string Distance::text() const {
  if (agree_through_max) return "<= e^-" + std::to_string(max_radius);
  if (n_prime == 0) return "1";
  return "e^-" + std::to_string(n_prime);
}

double Distance::value() const { return std::exp(-static_cast<double>(agree_through_max ? max_radius : n_prime)); }

Distance order_distance(const Ordering& a, const Ordering& b, int max_radius, std::size_t cap) {
  if (!(a.group() == b.group())) throw DomainError("order_distance: orderings live on different groups");
  if (max_radius < 0) throw DomainError("order_distance: negative radius");
  Distance d;
  d.max_radius = max_radius;
  Ball ball(a.group(), cap);
  for (int r = 1; r <= max_radius; ++r) {
    std::size_t start = ball.size();
    ball.grow_to(r);
    for (std::size_t i = start; i < ball.size(); ++i) {
      if (a.evaluate(ball[i]) != b.evaluate(ball[i])) {
        d.n_prime = r - 1;
        d.discriminator = ball[i];
        return d;
      }
    }
  }
  d.n_prime = max_radius;
  d.agree_through_max = true;
  return d;
}

// ---------------------------------------------------------------------------
// Consistency search

std::string to_string(ClosureMode m) {
  switch (m) {
    case ClosureMode::kLeft: return "left";
    case ClosureMode::kBi: return "bi";
    case ClosureMode::kConrad: return "conrad";
  }
  return "?";
}

ClosureMode parse_closure_mode(const std::string& s) {
  if (s == "left") return ClosureMode::kLeft;
  if (s == "bi") return ClosureMode::kBi;
  if (s == "conrad") return ClosureMode::kConrad;
  throw ParseError("unknown closure mode '" + s + "' (left, bi, conrad)");
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::kConsistent: return "consistent";
    case SearchStatus::kInconsistent: return "inconsistent";
    case SearchStatus::kUnknown: return "unknown";
  }
  return "?";
}

std::string to_string(DerivationStep::Rule r) {
  switch (r) {
    case DerivationStep::Rule::kSeed: return "seed";
    case DerivationStep::Rule::kProduct: return "product";
    case DerivationStep::Rule::kConjugate: return "conjugate";
    case DerivationStep::Rule::kConjugateInverse: return "conjugate_inv";
    case DerivationStep::Rule::kConrad: return "conrad";
  }
  return "?";
}

namespace {

Element apply_rule(const Group& G, DerivationStep::Rule rule, const Element& x, const Element& y) {
  using R = DerivationStep::Rule;
  switch (rule) {
    case R::kProduct: return G.multiply(x, y);
    case R::kConjugate: return G.multiply(G.multiply(y, x), G.invert(y));
    case R::kConjugateInverse: return G.multiply(G.multiply(G.invert(y), x), y);
    case R::kConrad: return G.multiply(G.multiply(G.invert(y), x), G.multiply(y, y));
    case R::kSeed: break;
  }
  throw DomainError("seed steps have no operands");
}

}  // namespace

bool replay_certificate(const Group& G, const Certificate& c) {
  const int n = static_cast<int>(c.steps.size());
  for (int i = 0; i < n; ++i) {
    const auto& s = c.steps[static_cast<std::size_t>(i)];
    if (s.rule == DerivationStep::Rule::kSeed) continue;
    if (s.x < 0 || s.x >= i || s.y < 0 || s.y >= i) return false;
    Element r = apply_rule(G, s.rule, c.steps[static_cast<std::size_t>(s.x)].result,
                           c.steps[static_cast<std::size_t>(s.y)].result);
    if (!G.equal(r, s.result)) return false;
  }
  if (c.clash_a < 0 || c.clash_a >= n) return false;
  const Element& a = c.steps[static_cast<std::size_t>(c.clash_a)].result;
  if (c.clash_b < 0) return G.is_identity(a);
  if (c.clash_b >= n) return false;
  return G.equal(a, G.invert(c.steps[static_cast<std::size_t>(c.clash_b)].result));
}

BallRestriction SearchVerdict::restriction(std::size_t i) const {
  return BallRestriction{group, radius, elements, assignments.at(i)};
}

namespace {

using Rule = DerivationStep::Rule;

// Closure engine over a finite region (a shortlex ball). Region index 0 is
// the identity; the query ball is a prefix of the region.
class ClosureEngine {
 public:
  ClosureEngine(const Ball& region, ClosureMode mode, int depth)
      : region_(region), G_(region.group()), mode_(mode), depth_(depth), n_(region.size()) {
    inv_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      auto j = region_.table().find(G_.invert(region_[i]));
      inv_[i] = j ? static_cast<std::int32_t>(*j) : -1;
    }
    in_.assign(n_, 0);
    rule_.assign(n_, Rule::kSeed);
    px_.assign(n_, -1);
    py_.assign(n_, -1);
  }

  std::int32_t inverse(std::size_t i) const { return inv_[i]; }

  /// Saturates from the seeds. Returns true when a contradiction appears.
  bool saturate(const std::vector<std::int32_t>& seeds) {
    for (auto i : list_) in_[static_cast<std::size_t>(i)] = 0;
    list_.clear();
    clash_a_ = clash_b_ = -1;
    for (auto s : seeds) {
      if (in_[static_cast<std::size_t>(s)]) continue;
      if (add(s, Rule::kSeed, -1, -1)) return true;
    }
    std::size_t old_end = 0;
    for (int round = 0; round < depth_; ++round) {
      const std::size_t cur_end = list_.size();
      if (old_end == cur_end) break;
      for (std::size_t a = 0; a < cur_end; ++a) {
        for (std::size_t b = (a < old_end ? old_end : 0); b < cur_end; ++b) {
          const auto x = list_[a];
          const auto y = list_[b];
          if (derive(x, y) || derive(y, x)) return true;
        }
      }
      old_end = cur_end;
    }
    return false;
  }

  bool contains(std::int32_t i) const { return in_[static_cast<std::size_t>(i)] != 0; }

  Certificate certificate() const {
    std::vector<std::int32_t> order;
    std::vector<char> seen(n_, 0);
    std::vector<std::int32_t> stack{clash_a_};
    if (clash_b_ >= 0) stack.push_back(clash_b_);
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(i)]) continue;
      seen[static_cast<std::size_t>(i)] = 1;
      order.push_back(i);
      if (px_[static_cast<std::size_t>(i)] >= 0) stack.push_back(px_[static_cast<std::size_t>(i)]);
      if (py_[static_cast<std::size_t>(i)] >= 0) stack.push_back(py_[static_cast<std::size_t>(i)]);
    }
    // insertion order is a topological order
    std::sort(order.begin(), order.end(), [&](std::int32_t u, std::int32_t v) {
      return pos_.at(u) < pos_.at(v);
    });
    std::unordered_map<std::int32_t, int> step_of;
    Certificate c;
    for (auto i : order) {
      const auto k = static_cast<std::size_t>(i);
      DerivationStep s{rule_[k], -1, -1, region_[k]};
      if (rule_[k] != Rule::kSeed) {
        s.x = step_of.at(px_[k]);
        s.y = step_of.at(py_[k]);
      }
      step_of[i] = static_cast<int>(c.steps.size());
      c.steps.push_back(std::move(s));
    }
    c.clash_a = step_of.at(clash_a_);
    c.clash_b = clash_b_ >= 0 ? step_of.at(clash_b_) : -1;
    return c;
  }

 private:
  // Index of the rule applied to region elements x, y, or -1 outside the region.
  std::int32_t image(Rule rule, std::int32_t x, std::int32_t y) {
    const std::uint64_t key = (static_cast<std::uint64_t>(rule) << 56) |
                              (static_cast<std::uint64_t>(x) << 28) | static_cast<std::uint64_t>(y);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Element r = apply_rule(G_, rule, region_[static_cast<std::size_t>(x)], region_[static_cast<std::size_t>(y)]);
    auto k = region_.table().find(r);
    std::int32_t v = k ? static_cast<std::int32_t>(*k) : -1;
    memo_.emplace(key, v);
    return v;
  }

  bool derive(std::int32_t x, std::int32_t y) {
    auto try_rule = [&](Rule rule) {
      auto z = image(rule, x, y);
      if (z < 0 || in_[static_cast<std::size_t>(z)]) return false;
      return add(z, rule, x, y);
    };
    if (try_rule(Rule::kProduct)) return true;
    if (mode_ == ClosureMode::kBi) {
      if (try_rule(Rule::kConjugate) || try_rule(Rule::kConjugateInverse)) return true;
    } else if (mode_ == ClosureMode::kConrad) {
      if (try_rule(Rule::kConrad)) return true;
    }
    return false;
  }

  bool add(std::int32_t z, Rule rule, std::int32_t x, std::int32_t y) {
    const auto k = static_cast<std::size_t>(z);
    in_[k] = 1;
    rule_[k] = rule;
    px_[k] = x;
    py_[k] = y;
    pos_[z] = list_.size();
    list_.push_back(z);
    if (z == 0) {
      clash_a_ = z;
      return true;
    }
    if (inv_[k] >= 0 && in_[static_cast<std::size_t>(inv_[k])]) {
      clash_a_ = z;
      clash_b_ = inv_[k];
      return true;
    }
    return false;
  }

  const Ball& region_;
  const Group& G_;
  ClosureMode mode_;
  int depth_;
  std::size_t n_;
  std::vector<std::int32_t> inv_;
  std::vector<char> in_;
  std::vector<Rule> rule_;
  std::vector<std::int32_t> px_, py_;
  std::unordered_map<std::int32_t, std::size_t> pos_;
  std::vector<std::int32_t> list_;
  std::unordered_map<std::uint64_t, std::int32_t> memo_;
  std::int32_t clash_a_{-1}, clash_b_{-1};
};

// Largest region radius <= wanted whose ball stays under the cap.
Ball region_ball(const Group& G, int wanted, std::size_t cap, int minimum) {
  Ball b(G, cap);
  int reached = 0;
  try {
    for (int r = 1; r <= wanted; ++r) {
      b.grow_to(r);
      reached = r;
    }
    return b;
  } catch (const ResourceError&) {
    if (reached < minimum) throw;
  }
  return Ball(G, reached, cap);
}

struct SearchState {
  const SearchOptions& opt;
  ClosureEngine& engine;
  SearchVerdict& out;
  std::vector<std::int32_t> rep;       // variable -> region index of its representative
  std::vector<signed char> value;      // variable -> +1 / -1 / 0
  std::vector<std::int32_t> fixed_seeds;
  bool aborted{false};

  std::vector<std::int32_t> seeds() const {
    std::vector<std::int32_t> s = fixed_seeds;
    for (std::size_t v = 0; v < rep.size(); ++v) {
      if (value[v] > 0) s.push_back(rep[v]);
      else if (value[v] < 0) s.push_back(engine.inverse(static_cast<std::size_t>(rep[v])));
    }
    return s;
  }

  void eliminate() {
    ++out.eliminated;
    if (out.certificates.size() < opt.max_certificates) out.certificates.push_back(engine.certificate());
  }

  void dfs() {
    if (aborted) return;
    if (++out.nodes > opt.node_budget) {
      aborted = true;
      out.reason = "node budget exhausted";
      return;
    }
    if (engine.saturate(seeds())) {
      eliminate();
      return;
    }
    std::vector<std::size_t> forced;
    std::optional<std::size_t> next;
    for (std::size_t v = 0; v < rep.size(); ++v) {
      if (value[v] != 0) continue;
      if (engine.contains(rep[v])) {
        value[v] = 1;
        forced.push_back(v);
      } else if (engine.contains(engine.inverse(static_cast<std::size_t>(rep[v])))) {
        value[v] = -1;
        forced.push_back(v);
      } else if (!next) {
        next = v;
      }
    }
    if (!next) {
      // leaf: saturate from every positive of the full table
      if (engine.saturate(seeds())) {
        eliminate();
      } else {
        record();
      }
    } else {
      for (signed char s : {1, -1}) {
        value[*next] = s;
        dfs();
        value[*next] = 0;
        if (aborted) break;
      }
    }
    for (auto v : forced) value[v] = 0;
  }

  void record() {
    if (out.assignments.size() >= opt.max_assignments) {
      aborted = true;
      out.reason = "assignment limit reached";
      return;
    }
    std::vector<Sign> table(out.elements.size());
    for (std::size_t i = 0; i < out.elements.size(); ++i) {
      // ball element i+1 of the region
      const auto idx = static_cast<std::int32_t>(i + 1);
      table[i] = engine.contains(idx) ? Sign::kPositive : Sign::kNegative;
    }
    out.assignments.push_back(std::move(table));
  }
};

}  // namespace

SearchVerdict consistent_extensions(const Group& group, int radius,
                                    const std::vector<std::pair<Element, Sign>>& fixed,
                                    const SearchOptions& opt) {
  if (radius < 0) throw DomainError("consistent_extensions: negative radius");
  SearchVerdict out{SearchStatus::kUnknown, group, radius, 0, 0, {}, {}, 0, 0, {}, ""};
  const int wanted = opt.region_radius >= 0 ? std::max(opt.region_radius, radius) : 3 * radius;
  Ball region(group, 0, opt.region_cap);
  try {
    region = region_ball(group, std::max(wanted, radius), opt.region_cap, radius);
  } catch (const ResourceError&) {
    out.reason = "closure region exceeded: the radius-" + std::to_string(radius) + " ball does not fit";
    return out;
  }
  out.region_radius = region.radius();
  out.region_size = region.size();
  const std::size_t ball_size = region.count_within(radius);
  for (std::size_t i = 1; i < ball_size; ++i) out.elements.push_back(region[i]);

  ClosureEngine engine(region, opt.mode, opt.depth);
  SearchState st{opt, engine, out, {}, {}, {}};
  std::vector<std::int32_t> var_of(ball_size, -1);
  for (std::size_t i = 1; i < ball_size; ++i) {
    const auto j = engine.inverse(i);
    if (j < 0) throw DomainError("inverse of a ball element missing from the region");
    if (static_cast<std::size_t>(j) == i) {
      out.status = SearchStatus::kInconsistent;
      out.reason = "torsion element " + group.format(region[i]);
      return out;
    }
    if (static_cast<std::size_t>(j) > i) {
      var_of[i] = static_cast<std::int32_t>(st.rep.size());
      var_of[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(st.rep.size());
      st.rep.push_back(static_cast<std::int32_t>(i));
    }
  }
  st.value.assign(st.rep.size(), 0);
  for (const auto& [g, s] : fixed) {
    auto k = region.table().find(g);
    if (!k) continue;  // outside the region: cannot take part in derivations
    if (*k == 0) throw DomainError("cannot fix the sign of the identity");
    std::int32_t positive = s == Sign::kPositive ? static_cast<std::int32_t>(*k) : engine.inverse(*k);
    if (*k < ball_size) {
      const auto v = static_cast<std::size_t>(var_of[*k]);
      const signed char want = positive == st.rep[v] ? 1 : -1;
      if (st.value[v] != 0 && st.value[v] != want) {
        out.status = SearchStatus::kInconsistent;
        out.reason = "fixed signs contradict each other";
        return out;
      }
      st.value[v] = want;
    } else {
      st.fixed_seeds.push_back(positive);
    }
  }
  st.dfs();
  if (st.aborted && out.assignments.size() < opt.max_assignments) {
    out.status = SearchStatus::kUnknown;
  } else if (!out.assignments.empty()) {
    out.status = SearchStatus::kConsistent;
  } else {
    out.status = SearchStatus::kInconsistent;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isolation probe

std::string to_string(ProbeResult::Kind k) {
  switch (k) {
    case ProbeResult::Kind::kRealized: return "realized";
    case ProbeResult::Kind::kUnrealized: return "unrealized";
    case ProbeResult::Kind::kNone: return "none-within-budget";
  }
  return "?";
}

namespace {

bool agrees_on(const Ordering& alt, const BallRestriction& base) {
  for (std::size_t i = 0; i < base.elements.size(); ++i) {
    if (alt.evaluate(base.elements[i]) != static_cast<int>(base.signs[i])) return false;
  }
  return true;
}

std::optional<Element> discriminator_up_to(const Ordering& a, const Ordering& b, int from, int to) {
  Ball ball(a.group(), from);
  for (int r = from + 1; r <= to; ++r) {
    std::size_t start = ball.size();
    try {
      ball.grow_to(r);
    } catch (const ResourceError&) {
      return std::nullopt;
    }
    for (std::size_t i = start; i < ball.size(); ++i) {
      if (a.evaluate(ball[i]) != b.evaluate(ball[i])) return ball[i];
    }
  }
  return std::nullopt;
}

QuadraticNumber qint(long long v) { return QuadraticNumber(Rational(mpz_class(std::to_string(v)))); }

// A vector of Z^n supported on coordinates i, j telling the two slope orders
// apart, found along the rays v_j = t.
std::optional<Element> zn_discriminator(const Ordering& a, const Ordering& b, const std::vector<QuadraticNumber>& s,
                                        int i, int j, long long tmax) {
  const int n = static_cast<int>(s.size());
  for (long long t = 1; t <= tmax; ++t) {
    for (int sign_t : {1, -1}) {
      // v_i near -(s_j t)/s_i
      QuadraticNumber target = -(s[static_cast<std::size_t>(j)] * qint(sign_t * t)) / s[static_cast<std::size_t>(i)];
      mpz_class fl = target.floor();
      for (mpz_class vi : {mpz_class(fl), mpz_class(fl + 1)}) {
        if (!vi.fits_slong_p()) continue;
        std::vector<std::int64_t> c(static_cast<std::size_t>(n), 0);
        c[static_cast<std::size_t>(i)] = vi.get_si();
        c[static_cast<std::size_t>(j)] = sign_t * t;
        Element v = ZnVector(c);
        if (a.evaluate(v) != b.evaluate(v)) return v;
      }
    }
  }
  return std::nullopt;
}

std::vector<Subgroup> known_convex_candidates(const Group& G) {
  std::vector<Subgroup> out;
  if (G.family() == Family::kBraid) {
    for (int j = 2; j < G.rank(); ++j) out.push_back(parabolic_subgroup(G.rank(), j));
  } else if (G.family() == Family::kKlein) {
    out.push_back(klein_fiber());
  }
  return out;
}

}  // namespace

ProbeResult isolated_probe(const Ordering& o, int radius, const ProbeOptions& opt) {
  const Group& G = o.group();
  const BallRestriction base = restrict_to_ball(o, radius);
  const int far = radius + opt.discriminator_slack;
  ProbeResult res;

  // 1. nearby slopes
  if (auto params = zn_slope_params(o); params && params->slope.size() >= 2) {
    const int n = static_cast<int>(params->slope.size());
    for (int j = 0; j < n; ++j) {
      int i = -1;
      for (int c = 0; c < n; ++c) {
        if (c != j && params->slope[static_cast<std::size_t>(c)].sign() != 0) {
          i = c;
          break;
        }
      }
      if (i < 0) continue;
      for (int k = 1; k <= opt.max_perturbation_exponent; ++k) {
        bool agreed = false;
        for (int sg : {1, -1}) {
          auto slope = params->slope;
          QuadraticNumber delta(Rational(sg, 1) / Rational(mpz_class(1) << k));
          slope[static_cast<std::size_t>(j)] += delta;
          Ordering alt = zn_order(n, slope, params->tiebreak);
          if (!agrees_on(alt, base)) continue;
          agreed = true;
          auto d = zn_discriminator(o, alt, params->slope, i, j, 1LL << std::min(k + 8, 24));
          if (d) {
            res.kind = ProbeResult::Kind::kRealized;
            res.method = "slope-perturbation";
            res.alternative = alt;
            res.discriminator = *d;
            return res;
          }
        }
        if (agreed) break;  // smaller steps only move the discriminator further out
      }
    }
  }

  // 2. conjugates
  {
    Ball conj(G, opt.conjugator_radius);
    for (std::size_t c = 1; c < conj.size(); ++c) {
      Ordering alt = conjugate_order(o, conj[c]);
      if (!agrees_on(alt, base)) continue;
      if (auto d = discriminator_up_to(o, alt, radius, far)) {
        res.kind = ProbeResult::Kind::kRealized;
        res.method = "conjugation";
        res.alternative = alt;
        res.discriminator = *d;
        return res;
      }
    }
  }

  // 3. reverse the order on a convex subgroup
  {
    std::vector<Element> samples = ball(G, radius + 1);
    for (const auto& H : known_convex_candidates(G)) {
      if (find_convexity_violation(o, H, samples)) continue;
      Ordering alt = extend_order(o, H, reverse_order(o));
      if (!agrees_on(alt, base)) continue;
      if (auto d = discriminator_up_to(o, alt, radius, far)) {
        res.kind = ProbeResult::Kind::kRealized;
        res.method = "reverse-extension";
        res.alternative = alt;
        res.discriminator = *d;
        return res;
      }
    }
  }

  // 4. consistent tables one sphere further out
  std::vector<std::pair<Element, Sign>> fixed;
  for (std::size_t i = 0; i < base.elements.size(); ++i) fixed.emplace_back(base.elements[i], base.signs[i]);
  SearchOptions so = opt.search;
  so.depth = opt.depth;
  SearchVerdict v = consistent_extensions(G, radius + 1, fixed, so);
  if (!v.assignments.empty()) {
    BallRestriction own = restrict_to_ball(o, radius + 1);
    for (std::size_t a = 0; a < v.assignments.size(); ++a) {
      BallRestriction t = v.restriction(a);
      if (auto k = first_difference(own, t)) {
        res.kind = ProbeResult::Kind::kUnrealized;
        res.method = "consistency-search";
        res.table = t;
        res.discriminator = own.elements[*k];
        res.note = "consistent at depth " + std::to_string(opt.depth) + "; not known to extend to an ordering";
        return res;
      }
    }
  }
  res.kind = ProbeResult::Kind::kNone;
  res.note = "consistency search: " + to_string(v.status) + ", " + std::to_string(v.assignments.size()) +
             " table(s) on the radius-" + std::to_string(radius + 1) + " ball" +
             (v.reason.empty() ? "" : " (" + v.reason + ")");
  return res;
}

// ---------------------------------------------------------------------------
// Conrad-type diagnostics

namespace {

std::vector<Element> positives(const Ordering& o, const std::vector<Element>& samples) {
  std::vector<Element> out;
  for (const auto& s : samples) {
    if (o.evaluate(s) > 0) out.push_back(s);
  }
  return out;
}

Element tidy(const Element& g) {
  if (const auto* w = std::get_if<BraidWord>(&g)) return braid::handle_reduce(*w);
  return g;
}

}  // namespace

std::optional<PairWitness> conrad_check(const Ordering& o, const std::vector<Element>& samples) {
  const Group& G = o.group();
  auto pos = positives(o, samples);
  for (const auto& f : pos) {
    for (const auto& g : pos) {
      Element w = G.multiply(G.multiply(G.invert(g), f), G.multiply(g, g));
      if (o.evaluate(w) < 0) return PairWitness{f, g};
    }
  }
  return std::nullopt;
}

WordPattern dehornoy_pattern() { return {{-1, -2}, {2, 3}}; }

std::string format_pattern(const WordPattern& w) {
  std::string s;
  for (const auto& [m, n] : w) {
    if (!s.empty()) s += " ";
    s += "f^" + std::to_string(m) + " g^" + std::to_string(n);
  }
  return s;
}

Element evaluate_pattern(const Group& G, const Element& f, const Element& g, const WordPattern& w) {
  Element r = G.identity();
  for (const auto& [m, n] : w) r = G.multiply(G.multiply(r, G.power(f, m)), G.power(g, n));
  return r;
}

Sign positive_word_check(const Ordering& o, const Element& f, const Element& g, const WordPattern& w) {
  long sm = 0, sn = 0;
  for (const auto& [m, n] : w) {
    sm += m;
    sn += n;
  }
  if (sm <= 0 || sn <= 0) throw DomainError("positive_word_check: exponent sums must be positive");
  if (o.evaluate(f) <= 0 || o.evaluate(g) <= 0) throw DomainError("positive_word_check: f and g must be positive");
  return o.sign(evaluate_pattern(o.group(), f, g, w));
}

std::optional<RecurrenceSuspect> right_recurrence_check(const Ordering& o, const std::vector<Element>& samples,
                                                        int nmax) {
  const Group& G = o.group();
  auto pos = positives(o, samples);
  for (const auto& f : pos) {
    const Element f_inv = G.invert(f);
    for (const auto& g : pos) {
      Element c = g;
      bool found = false;
      for (int n = 1; n <= nmax; ++n) {
        c = tidy(G.multiply(G.multiply(f_inv, c), f));
        if (o.evaluate(c) > 0) {
          found = true;
          break;
        }
      }
      if (!found) return RecurrenceSuspect{f, g, nmax};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conjugate convergence

ConvergenceReport conjugate_convergence(const Ordering& o, const Ordering& reference, int conjugator_radius,
                                        int target, int table_radius) {
  if (!(o.group() == reference.group())) throw DomainError("conjugate_convergence: groups differ");
  const Group& G = o.group();
  ConvergenceReport rep;
  rep.table_radius = table_radius >= 0 ? table_radius : target + 2;
  Ball table(G, rep.table_radius);
  std::vector<int> ref_sign(table.size());
  for (std::size_t i = 1; i < table.size(); ++i) ref_sign[i] = reference.evaluate(table[i]);

  Ball conj(G, conjugator_radius);
  struct Entry {
    bool done{false};
    bool differs{false};
    int agreement{0};
    std::size_t discriminator{0};
  };
  std::vector<Entry> memo(conj.size());
  auto examine = [&](std::size_t c) -> const Entry& {
    Entry& e = memo[c];
    if (e.done) return e;
    e.done = true;
    ++rep.conjugators_examined;
    Ordering alt = conjugate_order(o, conj[c]);
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (alt.evaluate(table[i]) != ref_sign[i]) {
        e.differs = true;
        e.agreement = table.length(i) - 1;
        e.discriminator = i;
        break;
      }
    }
    return e;
  };

  int prev = 0;
  bool any_differs = false;
  rep.reached_target = true;
  for (int m = 1; m <= target; ++m) {
    const int need = std::max(m, prev + 1);
    bool found = false;
    for (std::size_t c = 1; c < conj.size(); ++c) {
      const Entry& e = examine(c);
      any_differs = any_differs || e.differs;
      if (e.differs && e.agreement >= need) {
        rep.steps.push_back(ConjugateStep{m, conj[c], e.agreement, table[e.discriminator],
                                          table.length(e.discriminator)});
        prev = e.agreement;
        found = true;
        break;
      }
    }
    if (!found) {
      rep.reached_target = false;
      break;
    }
  }
  if (!any_differs) {
    // every examined conjugate matched; make sure the whole ball was seen
    for (std::size_t c = 1; c < conj.size(); ++c) any_differs = any_differs || examine(c).differs;
    rep.fixed_point = !any_differs;
  }
  return rep;
}

ConvergenceReport conjugate_convergence(const Ordering& o, int conjugator_radius, int target, int table_radius) {
  return conjugate_convergence(o, o, conjugator_radius, target, table_radius);
}

// ---------------------------------------------------------------------------
// Conradian soul

SoulResult conradian_soul_braid(int n, const std::string& which, int sample_radius) {
  if (n < 2) throw DomainError("conradian_soul_braid: need at least 2 strands");
  Ordering o = which == "dehornoy" ? dehornoy_order(n)
               : which == "dd"     ? dd_order(n)
                                   : throw ParseError("unknown braid order '" + which + "' (dehornoy, dd)");
  const Group& G = o.group();
  SoulResult res{n, o.description(), n, {}, std::nullopt, "", {}, G.identity()};
  for (int k = 1; k <= n - 1; ++k) {
    const int j = n - k;
    // sample <s_j, ..., s_{n-1}> as a shifted ball of B_{k+1}
    std::vector<Element> samples;
    for (const auto& e : ball(Group::braid(k + 1), sample_radius)) {
      samples.push_back(braid::shift(std::get<BraidWord>(e), j - 1, n));
    }
    SoulLevel level{j, true, samples.size()};
    auto pos = positives(o, samples);
    const WordPattern pattern = dehornoy_pattern();
    std::optional<PairWitness> w;
    std::string kind;
    Element value = G.identity();
    // the classical pair first, then every sampled pair
    std::vector<PairWitness> candidates;
    if (k >= 2) {
      Element f = G.parse("s" + std::to_string(j) + " s" + std::to_string(j + 1));
      Element g = G.parse("s" + std::to_string(j + 1));
      if (o.evaluate(f) > 0 && o.evaluate(g) > 0) candidates.push_back({f, g});
    }
    for (const auto& f : pos) {
      for (const auto& g : pos) candidates.push_back({f, g});
    }
    for (const auto& c : candidates) {
      Element x = evaluate_pattern(G, c.f, c.g, pattern);
      if (o.evaluate(x) < 0) {
        w = c;
        kind = "positive-word";
        value = x;
        break;
      }
    }
    if (!w) {
      if (auto c = conrad_check(o, samples)) {
        w = c;
        kind = "conrad";
        value = G.multiply(G.multiply(G.invert(c->g), c->f), G.multiply(c->g, c->g));
      }
    }
    level.conradian_on_samples = !w.has_value();
    res.levels.push_back(level);
    if (w) {
      res.witness = w;
      res.witness_kind = kind;
      res.pattern = kind == "positive-word" ? pattern : WordPattern{};
      res.witness_value = tidy(value);
      break;
    }
    res.j = j;
  }
  return res;
}

}  // namespace ordkit
