#include "ordkit/acceptance.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "ordkit/braid.hpp"
#include "ordkit/errors.hpp"
#include "ordkit/orders.hpp"
#include "ordkit/orderspace.hpp"
#include "ordkit/realization.hpp"

namespace ordkit {

namespace {

using braid::braid_equal;

BraidWord word(int n, const std::string& text) { return std::get<BraidWord>(Group::braid(n).parse(text)); }

BraidWord pow(const BraidWord& w, int k) {
  BraidWord base = k < 0 ? w.inverse() : w;
  BraidWord r(w.strands());
  for (int i = 0; i < std::abs(k); ++i) r = r * base;
  return r;
}

BraidWord sigma(int n, int i, int e = 1) { return BraidWord(n, {{i, e}}); }

std::string criterion_braid_identities(bool& pass) {
  int checked = 0;
  std::string failed;
  auto expect = [&](bool ok, const std::string& what) {
    ++checked;
    if (!ok && failed.empty()) failed = what;
  };
  for (int n = 3; n <= 5; ++n) {
    const std::string tag = "B" + std::to_string(n) + ": ";
    for (int i = 1; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        BraidWord si = sigma(n, i), sj = sigma(n, j);
        if (j == i + 1) {
          expect(braid_equal(si * sj * si, sj * si * sj), tag + "braid relation " + std::to_string(i));
        } else {
          expect(braid_equal(si * sj, sj * si), tag + "far commutation " + std::to_string(i) + "," + std::to_string(j));
        }
      }
    }
    const auto cone = braid::dd_cone(n);
    const auto& u = cone.generators;  // u[0] = u_1
    // w = u_2 u_3^-1 u_4 ... u_{n-1}^{(-1)^{n-1}}
    BraidWord w(n);
    for (int k = 2; k <= n - 1; ++k) w = w * pow(u[static_cast<std::size_t>(k - 1)], k % 2 == 0 ? 1 : -1);
    expect(braid_equal(w * pow(u[0], n - 1) * w, u[0]), tag + "first chain identity");
    expect(braid_equal(w * w, pow(u[1], n - 1)), tag + "second chain identity");
  }
  {
    const auto u = braid::dd_cone(3).generators;
    expect(braid_equal(sigma(3, 1), u[0] * u[1]), "B3: s1 = u1 u2");
    expect(braid_equal(u[1] * u[0] * u[0] * u[1], u[0]), "B3: u2 u1^2 u2 = u1");
  }
  pass = failed.empty();
  return std::to_string(checked) + " identities" + (failed.empty() ? "" : ", failed: " + failed);
}

std::string criterion_dehornoy_witness(bool& pass) {
  const BraidWord w = word(3, "s1^-1 s2^4");
  const auto s = braid::dehornoy_sign(w);
  const BraidWord u = word(3, "s1 s2"), v = word(3, "s2");
  const BraidWord pattern = u.inverse() * pow(v, -2) * pow(u, 2) * pow(v, 3);
  const bool eq = braid_equal(pattern, w);
  pass = s.value == braid::BraidSign::kNegative && eq;
  return "sign(s1^-1 s2^4) = " + braid::to_string(s.value) + ", u^-1 v^-2 u^2 v^3 = s1^-1 s2^4: " +
         (eq ? "true" : "false");
}

BraidWord random_word(std::mt19937& rng, int n, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), gen(1, n - 1), sgn(0, 1);
  std::vector<BraidLetter> letters;
  const int l = len(rng);
  for (int k = 0; k < l; ++k) letters.push_back({gen(rng), sgn(rng) ? 1 : -1});
  return BraidWord(n, letters);
}

BraidWord random_relator(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> pick(0, 2), gen(1, n - 1), sgn(0, 1);
  BraidWord r(n);
  for (;;) {
    const int kind = pick(rng);
    const int i = gen(rng);
    if (kind == 0) {  // s_i^e s_i^-e
      const int e = sgn(rng) ? 1 : -1;
      r = BraidWord(n, {{i, e}, {i, -e}});
    } else if (kind == 1) {
      if (i + 1 >= n) continue;
      BraidWord a = sigma(n, i), b = sigma(n, i + 1);
      r = a * b * a * b.inverse() * a.inverse() * b.inverse();
    } else {
      const int j = gen(rng);
      if (std::abs(i - j) < 2) continue;
      BraidWord a = sigma(n, i), b = sigma(n, j);
      r = a * b * a.inverse() * b.inverse();
    }
    break;
  }
  return sgn(rng) ? r : r.inverse();
}

BraidWord insert_at(const BraidWord& w, std::size_t pos, const BraidWord& r) {
  std::vector<BraidLetter> letters(w.letters().begin(), w.letters().begin() + static_cast<long>(pos));
  letters.insert(letters.end(), r.letters().begin(), r.letters().end());
  letters.insert(letters.end(), w.letters().begin() + static_cast<long>(pos), w.letters().end());
  return BraidWord(w.strands(), letters);
}

// Exactly one of: empty, s_i-positive, s_i-negative for the lowest index i.
int sign_class(const BraidWord& reduced) {
  if (reduced.empty()) return 0;
  int low = reduced.strands();
  for (const auto& l : reduced.letters()) low = std::min(low, l.index);
  int pos = 0, neg = 0;
  for (const auto& l : reduced.letters()) {
    if (l.index == low) (l.exponent > 0 ? pos : neg)++;
  }
  if (pos > 0 && neg > 0) return 2;  // neither
  return pos > 0 ? 1 : -1;
}

std::string criterion_braid_properties(bool& pass) {
  std::mt19937 rng(20240601u);
  std::size_t cases = 0, failures = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first = what;
  };
  for (int n = 3; n <= 5; ++n) {
    Group G = Group::braid(n);
    for (int c = 0; c < 1000; ++c) {
      ++cases;
      BraidWord w = random_word(rng, n, 20);
      const auto s = braid::dehornoy_sign(w);
      const int cls = sign_class(s.reduced);
      if (cls == 2 || cls != static_cast<int>(s.value) || !braid_equal(s.reduced, w)) {
        fail("trichotomy: " + G.format(w));
        continue;
      }
      if (static_cast<int>(braid::dehornoy_sign(w.inverse()).value) != -cls) {
        fail("antisymmetry: " + G.format(w));
        continue;
      }
      BraidWord x = w;
      std::uniform_int_distribution<std::size_t> at(0, 0);
      for (int k = 0; k < 10; ++k) {
        at = std::uniform_int_distribution<std::size_t>(0, x.size());
        const std::size_t p = at(rng);
        x = insert_at(x, p, random_relator(rng, n));
        if (braid::dehornoy_sign(x).value != s.value) {
          fail("relator insertion: " + G.format(w) + " -> " + G.format(x));
          break;
        }
      }
    }
  }
  pass = failures == 0;
  return std::to_string(cases) + " words, " + std::to_string(failures) + " failures" +
         (first.empty() ? "" : " (first: " + first + ")");
}

std::string criterion_dd_cone(bool& pass) {
  const Group G = Group::braid(3);
  const auto cone = braid::dd_cone(3);
  std::size_t positives = 0, failures = 0;
  std::string first;
  for (const auto& e : ball(G, 6)) {
    const auto& w = std::get<BraidWord>(e);
    if (braid::dd_sign(w) != braid::BraidSign::kPositive) continue;
    ++positives;
    bool ok = false;
    try {
      ok = braid_equal(braid::cone_word_to_braid(cone, braid::dd_cone_rewrite(w)), w);
    } catch (const Error&) {
      ok = false;
    }
    if (!ok && failures++ == 0) first = G.format(w);
  }
  pass = failures == 0 && positives > 0;
  return std::to_string(positives) + " DD-positive elements, " + std::to_string(failures) + " failures" +
         (first.empty() ? "" : " (first: " + first + ")");
}

std::string criterion_tararin(bool& pass) {
  std::ostringstream detail;
  pass = true;
  const auto orders = klein_orders();
  for (int r : {4, 5}) {
    SearchOptions so;
    so.depth = 6;
    so.mode = ClosureMode::kLeft;
    SearchVerdict v = consistent_extensions(Group::klein(), r, {}, so);
    std::vector<bool> used(orders.size(), false);
    bool matched = v.status == SearchStatus::kConsistent && v.assignments.size() == 4;
    for (std::size_t a = 0; matched && a < v.assignments.size(); ++a) {
      bool found = false;
      for (std::size_t k = 0; k < orders.size(); ++k) {
        if (!used[k] && !first_difference(restrict_to_ball(orders[k], r), v.restriction(a))) {
          used[k] = found = true;
          break;
        }
      }
      matched = found;
    }
    pass = pass && matched;
    detail << "radius " << r << ": " << v.assignments.size() << " assignments" << (matched ? " (all matched)" : " (mismatch)")
           << (r == 4 ? "; " : "");
  }
  return detail.str();
}

std::vector<Ordering> sikora_family() {
  std::mt19937 rng(7u);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<Ordering> out;
  std::vector<std::string> seen;
  while (out.size() < 20) {
    std::vector<QuadraticNumber> s;
    for (int k = 0; k < 2; ++k) s.emplace_back(Rational(coef(rng)), Rational(coef(rng)), 2);
    if (s[0].sign() == 0 && s[1].sign() == 0) continue;
    Ordering o = zn_order(2, s);
    if (std::find(seen.begin(), seen.end(), o.description()) != seen.end()) continue;
    seen.push_back(o.description());
    out.push_back(o);
  }
  return out;
}

std::string criterion_sikora(bool& pass) {
  std::size_t ok = 0;
  std::string first;
  const auto family = sikora_family();
  for (const auto& o : family) {
    ProbeResult p = isolated_probe(o, 4);
    bool good = p.kind == ProbeResult::Kind::kRealized && p.alternative && p.discriminator &&
                !first_difference(restrict_to_ball(o, 4), restrict_to_ball(*p.alternative, 4)) &&
                o.evaluate(*p.discriminator) != p.alternative->evaluate(*p.discriminator);
    if (good) {
      ++ok;
    } else if (first.empty()) {
      first = o.description();
    }
  }
  pass = ok == family.size();
  return std::to_string(ok) + "/" + std::to_string(family.size()) + " realized alternatives" +
         (first.empty() ? "" : " (first failure: " + first + ")");
}

std::string criterion_dd_isolation(bool& pass) {
  Ordering dd = dd_order(3);
  ProbeOptions po;
  po.depth = 6;
  ProbeResult p = isolated_probe(dd, 3, po);
  ConvergenceReport c = conjugate_convergence(dd, 4, 2);
  int best = -1;
  for (const auto& s : c.steps) best = std::max(best, s.agreement_radius);
  pass = p.kind == ProbeResult::Kind::kNone && best < 2;
  return "probe: " + to_string(p.kind) + (p.method.empty() ? "" : " via " + p.method) +
         "; best nontrivial conjugate agreement radius: " + (best < 0 ? std::string("none") : std::to_string(best));
}

std::string criterion_realization(bool& pass) {
  const std::vector<std::string> specs = {"zn:lex:2", "zn:slope:1,sqrt2", "dehornoy:b3",
                                          "dd:b3",    "magnus:f2",        "klein:++"};
  pass = true;
  std::string bad;
  for (const auto& spec : specs) {
    Ordering o = parse_order_spec(spec);
    Realization r = build_realization(o, 200);
    bool ok = !verify_realization(r).has_value();
    Ordering rec = recover_order(r);
    for (std::size_t i = 1; ok && i < r.size(); ++i) ok = rec.evaluate(r.element(i)) == o.evaluate(r.element(i));
    if (!ok) {
      pass = false;
      bad += (bad.empty() ? "" : ", ") + spec;
    }
  }
  return std::to_string(specs.size()) + " orders at N = 200" + (bad.empty() ? ", all round-trip" : ", failed: " + bad);
}

std::string criterion_holder(bool& pass) {
  Ordering o = parse_order_spec("zn:slope:1,sqrt2");
  const Element f = ZnVector({1, 0}), g = ZnVector({0, 1});
  const std::int64_t P = 10000;
  HolderResult h = holder_embedding(o, f, g, P);
  const Group& G = o.group();
  const QuadraticNumber root2 = QuadraticNumber::sqrt(2);
  std::size_t bad = 0;
  for (std::int64_t p = 1; p <= P; ++p) {
    const std::int64_t q = h.q[static_cast<std::size_t>(p - 1)];
    const Element gp = G.power(g, p);
    bool ok = o.compare(G.power(f, q), gp) != Comparison::kGreater &&
              o.compare(gp, G.power(f, q + 1)) == Comparison::kLess;
    QuadraticNumber diff = QuadraticNumber(Rational(q, 1) / Rational(p, 1)) - root2;
    if (diff.sign() < 0) diff = -diff;
    ok = ok && diff <= QuadraticNumber(Rational(1, 1) / Rational(p, 1));
    if (!ok) ++bad;
  }
  pass = bad == 0 && h.q.size() == static_cast<std::size_t>(P);
  return std::to_string(h.q.size()) + " brackets, " + std::to_string(bad) + " failures; q(P)/P = " +
         format_rational(h.ratios.back());
}

std::string criterion_crossings(bool& pass) {
  Realization d = build_realization(dehornoy_order(3), 300);
  CrossingSearch cd = detect_crossing(d);
  const bool found = cd.witness && recheck_crossing(d, *cd.witness);
  std::string detail = "dehornoy:b3: ";
  if (cd.witness) {
    const Group& G = d.group();
    detail += to_string(cd.witness->kind) + " f = " + G.format(cd.witness->f) + ", g = " + G.format(cd.witness->g) +
              (found ? " (rechecked)" : " (recheck failed)");
  } else {
    detail += "none";
  }
  bool quiet = true;
  for (const std::string spec : {"zn:lex:2", "magnus:f2"}) {
    CrossingSearch c = detect_crossing(build_realization(parse_order_spec(spec), 300));
    detail += "; " + spec + ": " + (c.witness ? "witness" : "none");
    quiet = quiet && !c.witness;
  }
  pass = found && quiet;
  return detail;
}

bool verify_step(const Ordering& conj, const Ordering& ref, const ConjugateStep& s) {
  if (first_difference(restrict_to_ball(conj, s.agreement_radius), restrict_to_ball(ref, s.agreement_radius))) {
    return false;
  }
  return conj.evaluate(s.discriminator) == -ref.evaluate(s.discriminator);
}

std::string criterion_convergence(bool& pass) {
  Ordering dh = dehornoy_order(3);
  Ordering dd = dd_order(3);
  const Group& G = dh.group();
  std::ostringstream detail;
  ConvergenceReport a = conjugate_convergence(dh, 8, 4);
  bool ok = a.steps.size() == 4;
  int prev = 0;
  for (const auto& s : a.steps) {
    ok = ok && s.agreement_radius >= s.m && s.agreement_radius > prev &&
         verify_step(conjugate_order(dh, s.conjugator), dh, s);
    prev = s.agreement_radius;
    detail << "g" << s.m << " = " << G.format(s.conjugator) << " (n=" << s.agreement_radius << "); ";
  }
  ConvergenceReport b = conjugate_convergence(dd, dh, 8, 2);
  bool ok_dd = b.steps.size() == 2;
  prev = 0;
  for (const auto& s : b.steps) {
    ok_dd = ok_dd && s.agreement_radius >= s.m && s.agreement_radius > prev &&
            verify_step(conjugate_order(dd, s.conjugator), dh, s);
    prev = s.agreement_radius;
  }
  detail << "DD conjugates toward D: " << b.steps.size() << "/2 verified";
  pass = ok && ok_dd;
  return detail.str();
}

bool soul_certified(const SoulResult& s, int expect_j) {
  if (s.j != expect_j || !s.witness || s.witness_kind != "positive-word") return false;
  Ordering o = parse_order_spec(s.order);
  const Group& G = o.group();
  const int killed = s.j - 1;
  for (const Element* e : {&s.witness->f, &s.witness->g}) {
    if (!braid::parabolic_membership(std::get<BraidWord>(*e), killed).member) return false;
    if (o.evaluate(*e) <= 0) return false;
  }
  Element w = evaluate_pattern(G, s.witness->f, s.witness->g, s.pattern);
  return o.evaluate(w) < 0 && G.equal(w, s.witness_value);
}

std::string criterion_soul(bool& pass) {
  std::ostringstream detail;
  bool ok = true;
  for (int n : {3, 4}) {
    SoulResult s = conradian_soul_braid(n, "dehornoy");
    const bool c = soul_certified(s, n - 1);
    ok = ok && c;
    detail << "B" << n << ": <s" << s.j << (s.j < n - 1 ? ",..." : "") << ">" << (c ? " certified" : " uncertified")
           << "; ";
  }
  std::mt19937 rng(99u);
  std::size_t failures = 0, total = 0;
  for (const std::string spec : {"zn:lex:2", "magnus:f2"}) {
    Ordering o = parse_order_spec(spec);
    std::vector<Element> pos;
    for (const auto& e : ball(o.group(), 2)) {
      if (o.evaluate(e) > 0) pos.push_back(e);
    }
    std::uniform_int_distribution<std::size_t> pick(0, pos.size() - 1);
    std::uniform_int_distribution<int> blocks(1, 3), ex(-2, 3);
    for (int k = 0; k < 1000; ++k) {
      WordPattern w;
      long sm = 0, sn = 0;
      do {
        w.clear();
        sm = sn = 0;
        const int b = blocks(rng);
        for (int i = 0; i < b; ++i) {
          w.emplace_back(ex(rng), ex(rng));
          sm += w.back().first;
          sn += w.back().second;
        }
      } while (sm <= 0 || sn <= 0);
      ++total;
      if (positive_word_check(o, pos[pick(rng)], pos[pick(rng)], w) != Sign::kPositive) ++failures;
    }
  }
  ok = ok && failures == 0;
  detail << "positive words: " << total << " checked, " << failures << " failures";
  pass = ok;
  return detail.str();
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all = {
      {1, "braid-identities", 10, criterion_braid_identities},
      {2, "dehornoy-witness", 1, criterion_dehornoy_witness},
      {3, "braid-properties", 120, criterion_braid_properties},
      {4, "dd-cone", 300, criterion_dd_cone},
      {5, "tararin", 60, criterion_tararin},
      {6, "sikora", 120, criterion_sikora},
      {7, "dd-isolation", 600, criterion_dd_isolation},
      {8, "realization", 300, criterion_realization},
      {9, "holder", 60, criterion_holder},
      {10, "crossings", 300, criterion_crossings},
      {11, "convergence", 1800, criterion_convergence},
      {12, "soul", 600, criterion_soul},
  };
  return all;
}

bool criterion_selected(const Criterion& c, const std::string& filter) {
  if (filter.empty()) return true;
  std::stringstream ss(filter);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == std::to_string(c.id) || c.name.find(item) != std::string::npos) return true;
  }
  return false;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << " " << std::setw(2) << r.id << " " << r.name << " [" << std::fixed
    << std::setprecision(2) << r.seconds << " s] " << r.detail;
  return s.str();
}

std::vector<CriterionResult> run_acceptance(const std::string& filter, std::ostream* out) {
  std::vector<CriterionResult> results;
  for (const auto& c : acceptance_criteria()) {
    if (!criterion_selected(c, filter)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      detail = c.run(pass);
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      pass = false;
      detail += "; over the time limit";
    }
    results.push_back({c.id, c.name, pass, detail, secs, c.limit_seconds});
    if (out) *out << format_result(results.back()) << std::endl;
  }
  return results;
}

}  // namespace ordkit
