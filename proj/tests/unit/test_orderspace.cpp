#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "ordkit/braid.hpp"
#include "ordkit/errors.hpp"
#include "ordkit/orders.hpp"
#include "ordkit/orderspace.hpp"

using namespace ordkit;

namespace {

std::string table_key(const BallRestriction& b) {
  std::string s;
  for (auto x : b.signs) s += sign_char(x);
  return s;
}

}  // namespace

TEST(Restriction, Examples) {
  BallRestriction z = restrict_to_ball(zn_lex(1), 2);
  ASSERT_EQ(z.elements.size(), 4u);
  EXPECT_EQ(z.sign_of(ZnVector({1})), Sign::kPositive);
  EXPECT_EQ(z.sign_of(ZnVector({2})), Sign::kPositive);
  EXPECT_EQ(z.sign_of(ZnVector({-1})), Sign::kNegative);
  EXPECT_EQ(z.sign_of(ZnVector({-2})), Sign::kNegative);

  const Group B = Group::braid(3);
  BallRestriction d = restrict_to_ball(dehornoy_order(3), 1);
  EXPECT_EQ(d.sign_of(B.parse("s1")), Sign::kPositive);
  EXPECT_EQ(d.sign_of(B.parse("s2")), Sign::kPositive);
  EXPECT_EQ(d.sign_of(B.parse("s1^-1")), Sign::kNegative);
  EXPECT_EQ(d.sign_of(B.parse("s2^-1")), Sign::kNegative);
  BallRestriction dd = restrict_to_ball(dd_order(3), 1);
  EXPECT_EQ(dd.sign_of(B.parse("s1")), Sign::kPositive);
  EXPECT_EQ(dd.sign_of(B.parse("s2")), Sign::kNegative);
  EXPECT_EQ(dd.sign_of(B.parse("s2^-1")), Sign::kPositive);
  EXPECT_THROW(restrict_to_ball(magnus_order(3), 12, 1000), ResourceError);
}

TEST(Distance, Examples) {
  Distance self = order_distance(dehornoy_order(3), dehornoy_order(3), 4);
  EXPECT_TRUE(self.agree_through_max);
  EXPECT_EQ(self.text(), "<= e^-4");
  Distance dd = order_distance(dehornoy_order(3), dd_order(3), 5);
  EXPECT_EQ(dd.n_prime, 0);
  EXPECT_EQ(dd.text(), "1");
  EXPECT_THROW(order_distance(dehornoy_order(3), zn_lex(2), 3), DomainError);
}

TEST(Extensions, IntegersHaveTwo) {
  for (int r = 1; r <= 4; ++r) {
    for (int depth : {1, 3, 6}) {
      SearchOptions so;
      so.depth = depth;
      SearchVerdict v = consistent_extensions(Group::zn(1), r, {}, so);
      EXPECT_EQ(v.status, SearchStatus::kConsistent);
      EXPECT_EQ(v.assignments.size(), 2u) << r << " " << depth;
    }
  }
}

TEST(Extensions, KleinHasFour) {
  std::set<std::string> expect;
  for (const auto& o : klein_orders()) expect.insert(table_key(restrict_to_ball(o, 4)));
  SearchVerdict v = consistent_extensions(Group::klein(), 4, {});
  std::set<std::string> got;
  for (std::size_t i = 0; i < v.assignments.size(); ++i) got.insert(table_key(v.restriction(i)));
  EXPECT_EQ(got, expect);
}

// Z^2: the number of sign patterns on a ball equals twice the number of
// lines spanned by its vectors.
TEST(Extensions, PlaneMatchesLineCount) {
  for (int r = 1; r <= 3; ++r) {
    std::vector<std::pair<long, long>> vs;
    for (const auto& e : ball(Group::zn(2), r)) {
      const auto& c = std::get<ZnVector>(e).coords();
      if (c[0] != 0 || c[1] != 0) vs.push_back({c[0], c[1]});
    }
    SearchOptions so;
    so.depth = 8;
    SearchVerdict v = consistent_extensions(Group::zn(2), r, {}, so);
    EXPECT_EQ(v.assignments.size(), oracle::z2_pattern_count(vs)) << r;
    std::set<std::string> got;
    for (std::size_t i = 0; i < v.assignments.size(); ++i) got.insert(table_key(v.restriction(i)));
    for (const std::string spec : {"zn:lex:2", "zn:slope:1,sqrt2", "zn:slope:-1,1/3", "zn:slope:0,1:tb=1"}) {
      EXPECT_TRUE(got.count(table_key(restrict_to_ball(parse_order_spec(spec), r)))) << spec;
    }
  }
}

TEST(Extensions, FixedSignsAndContradictions) {
  const Group Z = Group::zn(2);
  SearchVerdict v = consistent_extensions(Z, 1, {{ZnVector({1, 0}), Sign::kPositive}});
  EXPECT_EQ(v.assignments.size(), 2u);
  SearchVerdict bad = consistent_extensions(Z, 2, {{ZnVector({1, 0}), Sign::kPositive}, {ZnVector({2, 0}), Sign::kNegative}});
  EXPECT_EQ(bad.status, SearchStatus::kInconsistent);
  ASSERT_FALSE(bad.certificates.empty());
  for (const auto& c : bad.certificates) EXPECT_TRUE(replay_certificate(Z, c));
}

TEST(Extensions, TinyRegionIsUnknown) {
  SearchOptions so;
  so.region_cap = 10;
  SearchVerdict v = consistent_extensions(Group::braid(3), 2, {}, so);
  EXPECT_EQ(v.status, SearchStatus::kUnknown);
  EXPECT_FALSE(v.reason.empty());
}

TEST(Extensions, BiModeRulesOutBraidTables) {
  // s1 and s2 are conjugate, so a bi-invariant table cannot split them
  SearchOptions so;
  so.mode = ClosureMode::kBi;
  so.depth = 4;
  const Group B = Group::braid(3);
  SearchVerdict v = consistent_extensions(B, 1, {{B.parse("s1"), Sign::kPositive}, {B.parse("s2"), Sign::kNegative}}, so);
  EXPECT_EQ(v.status, SearchStatus::kInconsistent);
  ASSERT_FALSE(v.certificates.empty());
  for (const auto& c : v.certificates) EXPECT_TRUE(replay_certificate(B, c));
  // Klein group is not bi-orderable either
  SearchVerdict k = consistent_extensions(Group::klein(), 1, {}, so);
  EXPECT_EQ(k.status, SearchStatus::kInconsistent);
}

TEST(Extensions, ConradModeKeepsKlein) {
  SearchOptions so;
  so.mode = ClosureMode::kConrad;
  SearchVerdict v = consistent_extensions(Group::klein(), 3, {}, so);
  EXPECT_EQ(v.assignments.size(), 4u);
}

TEST(Probe, Examples) {
  ProbeResult z2 = isolated_probe(parse_order_spec("zn:slope:1,sqrt2"), 4);
  ASSERT_EQ(z2.kind, ProbeResult::Kind::kRealized);
  ASSERT_TRUE(z2.alternative && z2.discriminator);
  EXPECT_FALSE(first_difference(restrict_to_ball(*z2.alternative, 4), restrict_to_ball(parse_order_spec("zn:slope:1,sqrt2"), 4)));
  EXPECT_EQ(isolated_probe(zn_lex(1), 3).kind, ProbeResult::Kind::kNone);
  EXPECT_EQ(isolated_probe(dd_order(3), 3).kind, ProbeResult::Kind::kNone);
  ProbeResult d = isolated_probe(dehornoy_order(3), 2);
  EXPECT_EQ(d.kind, ProbeResult::Kind::kRealized);
}

TEST(Diagnostics, ConradCheck) {
  EXPECT_FALSE(conrad_check(zn_lex(2), ball(Group::zn(2), 3)));
  EXPECT_FALSE(conrad_check(magnus_order(2), ball(Group::free(2), 2)));
  EXPECT_TRUE(conrad_check(dehornoy_order(3), ball(Group::braid(3), 4)));
}

TEST(Diagnostics, PositiveWords) {
  Ordering d = dehornoy_order(3);
  const Group& B = d.group();
  EXPECT_EQ(positive_word_check(d, B.parse("s1 s2"), B.parse("s2"), dehornoy_pattern()), Sign::kNegative);
  Ordering m = magnus_order(2);
  EXPECT_EQ(positive_word_check(m, m.group().parse("a"), m.group().parse("b"), dehornoy_pattern()), Sign::kPositive);
  EXPECT_THROW(positive_word_check(d, B.parse("s1"), B.parse("s2"), {{-1, 1}}), DomainError);
  EXPECT_THROW(positive_word_check(d, B.parse("s1^-1"), B.parse("s2"), dehornoy_pattern()), DomainError);
  EXPECT_EQ(format_pattern(dehornoy_pattern()), "f^-1 g^-2 f^2 g^3");
}

TEST(Diagnostics, RightRecurrence) {
  EXPECT_FALSE(right_recurrence_check(zn_lex(2), ball(Group::zn(2), 3), 1));
  EXPECT_FALSE(right_recurrence_check(magnus_order(2), ball(Group::free(2), 2), 1));
  EXPECT_TRUE(right_recurrence_check(dehornoy_order(3), ball(Group::braid(3), 4), 20));
  for (const auto& k : klein_orders()) EXPECT_FALSE(right_recurrence_check(k, ball(Group::klein(), 4), 20));
}

TEST(Convergence, Examples) {
  ConvergenceReport z = conjugate_convergence(zn_lex(2), 3, 2);
  EXPECT_TRUE(z.fixed_point);
  EXPECT_TRUE(z.steps.empty());
  ConvergenceReport d = conjugate_convergence(dehornoy_order(3), 6, 3);
  ASSERT_TRUE(d.reached_target);
  ASSERT_EQ(d.steps.size(), 3u);
  ConvergenceReport dd = conjugate_convergence(dd_order(3), 4, 2);
  for (const auto& s : dd.steps) EXPECT_LT(s.agreement_radius, 2);
}

TEST(Soul, Examples) {
  SoulResult s3 = conradian_soul_braid(3, "dehornoy");
  EXPECT_EQ(s3.j, 2);
  ASSERT_TRUE(s3.witness);
  const Group B = Group::braid(3);
  EXPECT_TRUE(B.equal(s3.witness->f, B.parse("s1 s2")));
  EXPECT_TRUE(B.equal(s3.witness->g, B.parse("s2")));
  EXPECT_EQ(conradian_soul_braid(4, "dehornoy").j, 3);
  SoulResult dd = conradian_soul_braid(3, "dd");
  EXPECT_EQ(dd.j, 2);
  EXPECT_TRUE(dd.witness.has_value());
  EXPECT_THROW(conradian_soul_braid(3, "magnus"), ParseError);
}

// -- properties ---------------------------------------------------------------

TEST(SpaceProperty, ShippedRestrictionsSatisfyAxioms) {
  for (const std::string spec : {"dehornoy:b3", "dd:b3", "dd:b4", "magnus:f2", "klein:-+", "zn:slope:1,sqrt2"}) {
    auto p = check_restriction_axioms(restrict_to_ball(parse_order_spec(spec), 3));
    EXPECT_FALSE(p) << spec;
  }
}

TEST(SpaceProperty, Projection) {
  struct Case {
    Group g;
    int r;
  };
  for (const auto& c : {Case{Group::zn(2), 2}, Case{Group::klein(), 2}, Case{Group::zn(3), 1}}) {
    SearchOptions so;
    so.depth = 4;
    SearchVerdict small = consistent_extensions(c.g, c.r, {}, so);
    SearchVerdict big = consistent_extensions(c.g, c.r + 1, {}, so);
    std::set<std::string> keys;
    for (std::size_t i = 0; i < small.assignments.size(); ++i) keys.insert(table_key(small.restriction(i)));
    const std::size_t n = small.elements.size();
    for (const auto& a : big.assignments) {
      std::string k;
      for (std::size_t i = 0; i < n; ++i) k += sign_char(a[i]);
      ASSERT_TRUE(keys.count(k)) << c.g.name();
    }
  }
}

TEST(SpaceProperty, CertificatesReplay) {
  std::mt19937 rng(51u);
  const Group B = Group::braid(3);
  auto b2 = ball(B, 2);
  std::uniform_int_distribution<std::size_t> pick(1, b2.size() - 1);
  int inconsistent = 0;
  for (int k = 0; k < 40; ++k) {
    std::vector<std::pair<Element, Sign>> fixed;
    for (int i = 0; i < 4; ++i) fixed.emplace_back(b2[pick(rng)], k % 2 ? Sign::kPositive : Sign::kNegative);
    SearchOptions so;
    so.depth = 3;
    so.max_assignments = 8;
    SearchVerdict v = consistent_extensions(B, 2, fixed, so);
    inconsistent += v.status == SearchStatus::kInconsistent;
    for (const auto& c : v.certificates) ASSERT_TRUE(replay_certificate(B, c));
  }
  EXPECT_GT(inconsistent, 0);
}

TEST(SpaceProperty, TamperedCertificatesFail) {
  const Group Z = Group::zn(1);
  SearchVerdict v = consistent_extensions(Z, 2, {{ZnVector({1}), Sign::kPositive}, {ZnVector({2}), Sign::kNegative}});
  ASSERT_FALSE(v.certificates.empty());
  Certificate c = v.certificates.front();
  c.steps.back().result = ZnVector({5});
  EXPECT_FALSE(replay_certificate(Z, c));
}

TEST(SpaceProperty, DistanceIsAnUltrametric) {
  std::vector<Ordering> os;
  const Group B = Group::braid(3);
  for (const auto& g : ball(B, 2)) os.push_back(conjugate_order(dehornoy_order(3), g));
  os.push_back(dd_order(3));
  for (std::size_t i = 0; i < os.size(); ++i) {
    for (std::size_t j = 0; j < os.size(); ++j) {
      Distance dij = order_distance(os[i], os[j], 5);
      ASSERT_EQ(dij.n_prime, order_distance(os[j], os[i], 5).n_prime);
      if (i == j) ASSERT_TRUE(dij.agree_through_max);
      for (std::size_t k = 0; k < os.size(); k += 3) {
        const double a = order_distance(os[i], os[k], 5).value();
        const double b = std::max(dij.value(), order_distance(os[j], os[k], 5).value());
        ASSERT_LE(a, b + 1e-12);
      }
    }
  }
}

TEST(SpaceProperty, ConvergenceReverifies) {
  Ordering d = dehornoy_order(3);
  ConvergenceReport rep = conjugate_convergence(dd_order(3), d, 6, 2);
  ASSERT_EQ(rep.steps.size(), 2u);
  for (const auto& s : rep.steps) {
    Ordering c = conjugate_order(dd_order(3), s.conjugator);
    EXPECT_FALSE(first_difference(restrict_to_ball(c, s.agreement_radius), restrict_to_ball(d, s.agreement_radius)));
    EXPECT_EQ(c.sign(s.discriminator), -d.sign(s.discriminator));
  }
}

TEST(SpaceProperty, SoulCertificatesReverify) {
  for (int n : {3, 4, 5}) {
    SoulResult s = conradian_soul_braid(n, "dehornoy");
    ASSERT_EQ(s.j, n - 1);
    ASSERT_TRUE(s.witness);
    Ordering o = dehornoy_order(n);
    for (const Element* e : {&s.witness->f, &s.witness->g}) {
      EXPECT_TRUE(braid::parabolic_membership(std::get<BraidWord>(*e), s.j - 1).member);
    }
    EXPECT_EQ(o.sign(evaluate_pattern(o.group(), s.witness->f, s.witness->g, s.pattern)), Sign::kNegative);
  }
}

TEST(SpaceProperty, PositiveWordsInConradianOrders) {
  std::mt19937 rng(52u);
  for (const std::string spec : {"zn:lex:2", "magnus:f2", "zn:slope:1,sqrt2"}) {
    Ordering o = parse_order_spec(spec);
    std::vector<Element> pos;
    for (const auto& e : ball(o.group(), 2)) {
      if (!o.group().is_identity(e) && o.sign(e) == Sign::kPositive) pos.push_back(e);
    }
    std::uniform_int_distribution<std::size_t> pick(0, pos.size() - 1);
    std::uniform_int_distribution<int> ex(-3, 3);
    for (int k = 0; k < 300; ++k) {
      WordPattern w = {{ex(rng), ex(rng)}, {ex(rng), ex(rng)}};
      if (w[0].first + w[1].first <= 0 || w[0].second + w[1].second <= 0) continue;
      ASSERT_EQ(positive_word_check(o, pos[pick(rng)], pos[pick(rng)], w), Sign::kPositive) << spec;
    }
  }
}
