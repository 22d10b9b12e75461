#include "ordkit/realization.hpp"

#include <algorithm>

#include "ordkit/errors.hpp"

namespace ordkit {

Realization::Realization(Ordering source, std::vector<Element> enumeration, std::vector<Rational> t) {
  if (enumeration.empty()) throw DomainError("realization needs at least the identity");
  if (enumeration.size() != t.size()) throw DomainError("realization: enumeration and t differ in length");
  ElementTable table(source.group());
  for (const auto& g : enumeration) {
    if (!table.insert(g).second) {
      throw DomainError("realization: enumeration repeats " + source.group().format(g));
    }
  }
  std::vector<std::size_t> sorted(enumeration.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = i;
  std::sort(sorted.begin(), sorted.end(), [&](std::size_t x, std::size_t y) { return t[x] < t[y]; });
  std::vector<std::size_t> rank(sorted.size());
  for (std::size_t p = 0; p < sorted.size(); ++p) rank[sorted[p]] = p;
  data_ = std::make_shared<const Data>(Data{std::move(source), std::move(enumeration), std::move(t),
                                            std::move(table), std::move(sorted), std::move(rank)});
}

Realization build_realization(const Ordering& o, std::size_t n) {
  if (n == 0) throw DomainError("realization size must be positive");
  return build_realization(o, shortlex_prefix(o.group(), n));
}

Realization build_realization(const Ordering& o, std::vector<Element> enumeration) {
  const Group& G = o.group();
  if (enumeration.empty() || !G.is_identity(enumeration.front())) {
    throw DomainError("enumeration must start with the identity");
  }
  std::vector<Rational> t(enumeration.size());
  std::vector<std::size_t> sorted{0};  // indices in increasing order
  t[0] = 0;
  for (std::size_t k = 1; k < enumeration.size(); ++k) {
    const Element& g = enumeration[k];
    // first rank whose element is above g
    std::size_t lo = 0, hi = sorted.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      Comparison c = o.compare(enumeration[sorted[mid]], g);
      if (c == Comparison::kEqual) {
        throw DomainError("enumeration repeats " + G.format(g));
      }
      if (c == Comparison::kLess) lo = mid + 1;
      else hi = mid;
    }
    if (lo == sorted.size()) t[k] = t[sorted.back()] + 1;
    else if (lo == 0) t[k] = t[sorted.front()] - 1;
    else t[k] = (t[sorted[lo - 1]] + t[sorted[lo]]) / 2;
    sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(lo), k);
  }
  return Realization(o, std::move(enumeration), std::move(t));
}

std::optional<std::string> verify_realization(const Realization& r, std::size_t equivariance_samples) {
  const Group& G = r.group();
  if (!G.is_identity(r.element(0))) return "g_0 is not the identity";
  if (r.t(0) != 0) return "t(g_0) != 0";
  for (std::size_t p = 1; p < r.size(); ++p) {
    if (!(r.grid(p - 1) < r.grid(p))) return "t-values are not distinct";
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      Comparison c = r.source().compare(r.element(i), r.element(j));
      bool t_less = r.t(i) < r.t(j);
      if ((c == Comparison::kLess) != t_less || c == Comparison::kEqual) {
        return "t is not order preserving on (" + G.format(r.element(i)) + ", " + G.format(r.element(j)) + ")";
      }
    }
  }
  std::size_t rows = std::min(equivariance_samples, r.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      auto k = r.index_of(G.multiply(r.element(i), r.element(j)));
      if (!k) continue;
      if (evaluate_action(r, r.element(i), r.t(j)) != r.t(*k)) {
        return "grid equivariance fails for " + G.format(r.element(i));
      }
    }
  }
  return std::nullopt;
}

namespace {

const Rational& image_at(const Realization& r, const Element& g, std::size_t rank) {
  const Group& G = r.group();
  auto k = r.index_of(G.multiply(g, r.element(r.by_position()[rank])));
  if (!k) {
    throw DomainError("action of " + G.format(g) + " leaves the realized prefix");
  }
  return r.t(*k);
}

}  // namespace

Rational evaluate_action(const Realization& r, const Element& g, const Rational& x) {
  const std::size_t n = r.size();
  // first rank with grid(p) >= x
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (r.grid(mid) < x) lo = mid + 1;
    else hi = mid;
  }
  if (lo < n && r.grid(lo) == x) return image_at(r, g, lo);
  if (lo == n) return image_at(r, g, n - 1) + (x - r.grid(n - 1));
  if (lo == 0) return image_at(r, g, 0) + (x - r.grid(0));
  const Rational& x0 = r.grid(lo - 1);
  const Rational& x1 = r.grid(lo);
  Rational y0 = image_at(r, g, lo - 1);
  Rational y1 = image_at(r, g, lo);
  return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

namespace {

class RecoveredImpl : public OrderImpl {
 public:
  explicit RecoveredImpl(Realization r) : r_(std::move(r)) {}
  int evaluate(const Element& g) const override {
    if (!r_.index_of(g)) throw DomainError("element is outside the realized prefix");
    return sgn(evaluate_action(r_, g, Rational(0)));
  }

 private:
  Realization r_;
};

}  // namespace

Ordering recover_order(const Realization& r) {
  return Ordering(r.group(), std::make_shared<RecoveredImpl>(r), "recovered:" + r.source().description(),
                  static_cast<PropertySet>(Property::kLeftInvariant));
}

ActionTable action_table(const Realization& r, std::size_t rows) {
  const Group& G = r.group();
  rows = std::min(rows, r.size());
  ActionTable out;
  out.image.assign(rows, std::vector<std::int32_t>(r.size(), -1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t p = 0; p < r.size(); ++p) {
      auto k = r.index_of(G.multiply(r.element(i), r.element(r.by_position()[p])));
      if (k) out.image[i][p] = static_cast<std::int32_t>(r.position(*k));
    }
  }
  return out;
}

std::string to_string(CrossingKind k) { return k == CrossingKind::kCrossed ? "crossed" : "transversal"; }

int displacement_sign(const Realization& r, const Element& g, std::size_t rank) {
  const Element& h = r.element(r.by_position()[rank]);
  const Group& G = r.group();
  return r.source().evaluate(G.multiply(G.multiply(G.invert(h), g), h));
}

namespace {

// Ranks where a row of displacement signs flips: segment s means the sign at
// s differs from the sign at s+1.
std::vector<std::size_t> sign_changes(const std::vector<signed char>& row) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s + 1 < row.size(); ++s) {
    if (row[s] != row[s + 1]) out.push_back(s);
  }
  return out;
}

bool less_eq(const Ordering& o, const Element& x, const Element& y) {
  return o.compare(x, y) != Comparison::kGreater;
}

// g pushes the fixed point in segment `seg` into [x_lo, x_hi]: the images of
// both endpoints of the segment land there.
bool pushes_inside(const Realization& r, const Element& g, std::size_t seg, std::size_t lo, std::size_t hi) {
  const Group& G = r.group();
  const Ordering& o = r.source();
  const auto& sorted = r.by_position();
  const Element& h_lo = r.element(sorted[lo]);
  const Element& h_hi = r.element(sorted[hi]);
  Element g0 = G.multiply(g, r.element(sorted[seg]));
  Element g1 = G.multiply(g, r.element(sorted[seg + 1]));
  return less_eq(o, h_lo, g0) && less_eq(o, g1, h_hi);
}

CrossingWitness make_witness(const Realization& r, CrossingKind kind, std::size_t fi, std::size_t gi,
                             std::size_t a, std::size_t b, bool moves_b) {
  return CrossingWitness{kind, fi, gi, r.element(fi), r.element(gi), a, b, moves_b,
                         r.grid(a), r.grid(a + 1), r.grid(b), r.grid(b + 1)};
}

}  // namespace

CrossingSearch detect_crossing(const Realization& r, std::size_t budget) {
  CrossingSearch out;
  const std::size_t n = r.size();
  if (n < 3) return out;
  std::vector<std::vector<signed char>> sign(n);
  std::vector<std::vector<std::size_t>> changes(n);
  for (std::size_t i = 1; i < n; ++i) {
    sign[i].resize(n);
    for (std::size_t p = 0; p < n; ++p) sign[i][p] = static_cast<signed char>(displacement_sign(r, r.element(i), p));
    changes[i] = sign_changes(sign[i]);
  }

  auto spend = [&]() {
    if (out.pairs_examined >= budget) {
      out.budget_exhausted = true;
      return false;
    }
    ++out.pairs_examined;
    return true;
  };

  // transversal
  for (std::size_t fi = 1; fi < n; ++fi) {
    const auto& fc = changes[fi];
    for (std::size_t gi = 1; gi < n; ++gi) {
      if (gi == fi || fc.empty() || changes[gi].empty()) continue;
      if (!spend()) return out;
      const auto& gc = changes[gi];
      for (std::size_t u = 0; u < fc.size(); ++u) {
        const std::size_t a = fc[u];
        if (sign[fi][a] != 1) continue;
        // f stays negative on ranks a+1 .. next change
        const std::size_t f_end = u + 1 < fc.size() ? fc[u + 1] : n - 1;
        for (std::size_t v = 0; v < gc.size(); ++v) {
          const std::size_t b = gc[v];
          if (b <= a || sign[gi][b] != 1) continue;
          if (b + 1 > f_end) break;
          const std::size_t g_begin = v > 0 ? gc[v - 1] + 1 : 0;
          if (g_begin > a) continue;
          out.witness = make_witness(r, CrossingKind::kTransversal, fi, gi, a, b, false);
          return out;
        }
      }
    }
  }

  // crossed
  for (std::size_t fi = 1; fi < n; ++fi) {
    const auto& fc = changes[fi];
    for (std::size_t u = 0; u + 1 < fc.size(); ++u) {
      const std::size_t a = fc[u];
      const std::size_t b = fc[u + 1];
      for (std::size_t gi = 1; gi < n; ++gi) {
        if (gi == fi) continue;
        if (!spend()) return out;
        const Element& g = r.element(gi);
        if (pushes_inside(r, g, a, a + 1, b)) {
          out.witness = make_witness(r, CrossingKind::kCrossed, fi, gi, a, b, false);
          return out;
        }
        if (pushes_inside(r, g, b, a + 1, b)) {
          out.witness = make_witness(r, CrossingKind::kCrossed, fi, gi, a, b, true);
          return out;
        }
      }
    }
  }
  return out;
}

bool recheck_crossing(const Realization& r, const CrossingWitness& w) {
  const std::size_t n = r.size();
  const std::size_t a = w.a_rank;
  const std::size_t b = w.b_rank;
  if (!(a < b) || b + 1 >= n) return false;
  if (r.grid(a) != w.a_low || r.grid(a + 1) != w.a_high || r.grid(b) != w.b_low || r.grid(b + 1) != w.b_high) {
    return false;
  }
  const Group& G = r.group();
  if (!G.equal(r.element(w.f_index), w.f) || !G.equal(r.element(w.g_index), w.g)) return false;
  // Displacement signs, cross-checked against t-values wherever the image is realized.
  auto disp = [&](const Element& g, std::size_t p) {
    int s = displacement_sign(r, g, p);
    auto k = r.index_of(G.multiply(g, r.element(r.by_position()[p])));
    if (k && sgn(r.t(*k) - r.grid(p)) != s) return 0;
    return s;
  };
  if (w.kind == CrossingKind::kTransversal) {
    if (disp(w.f, a) != 1) return false;
    for (std::size_t p = a + 1; p <= b + 1; ++p) {
      if (disp(w.f, p) != -1) return false;
    }
    for (std::size_t p = a; p <= b; ++p) {
      if (disp(w.g, p) != 1) return false;
    }
    return disp(w.g, b + 1) == -1;
  }
  int inside = disp(w.f, a + 1);
  if (inside == 0 || disp(w.f, a) != -inside || disp(w.f, b + 1) != -inside) return false;
  for (std::size_t p = a + 1; p <= b; ++p) {
    if (disp(w.f, p) != inside) return false;
  }
  return pushes_inside(r, w.g, w.moves_b ? b : a, a + 1, b);
}

std::optional<AlmostFreeWitness> check_almost_free(const Realization& r, std::size_t samples) {
  std::size_t rows = samples == 0 ? r.size() : std::min(samples, r.size());
  for (std::size_t i = 1; i < rows; ++i) {
    std::optional<std::size_t> up, down;
    for (std::size_t p = 0; p < r.size() && !(up && down); ++p) {
      int s = displacement_sign(r, r.element(i), p);
      if (s > 0 && !up) up = p;
      if (s < 0 && !down) down = p;
    }
    if (up && down) return AlmostFreeWitness{r.element(i), r.grid(*up), r.grid(*down)};
  }
  return std::nullopt;
}

HolderResult holder_embedding(const Ordering& o, const Element& f, const Element& g, std::int64_t pmax,
                              std::int64_t exponent_bound) {
  const Group& G = o.group();
  if (o.evaluate(f) <= 0) throw DomainError("holder_embedding: f must be positive");
  if (pmax < 1) throw DomainError("holder_embedding: pmax must be at least 1");
  HolderResult out;
  out.bracket_width = Rational(1, static_cast<unsigned long>(pmax));
  std::int64_t guess = 0;
  for (std::int64_t p = 1; p <= pmax; ++p) {
    const Element gp = G.power(g, p);
    // f^q <= g^p
    auto below = [&](std::int64_t q) { return o.compare(G.power(f, q), gp) != Comparison::kGreater; };
    auto check_bound = [&](std::int64_t q) {
      if (q > exponent_bound || q < -exponent_bound) {
        throw DomainError("holder_embedding: no bracket within the exponent bound (not Archimedean)");
      }
    };
    std::int64_t lo, hi;  // below(lo) holds, below(hi) fails
    std::int64_t step = 1;
    if (below(guess)) {
      lo = guess;
      hi = guess + 1;
      while (below(hi)) {
        lo = hi;
        hi = guess + (step *= 2);
        check_bound(hi);
      }
    } else {
      hi = guess;
      lo = guess - 1;
      while (!below(lo)) {
        hi = lo;
        lo = guess - (step *= 2);
        check_bound(lo);
      }
    }
    while (hi - lo > 1) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (below(mid)) lo = mid;
      else hi = mid;
    }
    out.q.push_back(lo);
    out.ratios.push_back(Rational(mpz_class(std::to_string(lo)), mpz_class(std::to_string(p))));
    out.ratios.back().canonicalize();
    // q(p+1) is within one of q(p) + q(1)
    guess = lo + out.q.front();
  }
  return out;
}

}  // namespace ordkit
