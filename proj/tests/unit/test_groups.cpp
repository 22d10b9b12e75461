#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "ordkit/errors.hpp"
#include "ordkit/groups.hpp"

using namespace ordkit;

TEST(Groups, Products) {
  Group F = Group::free(2);
  EXPECT_TRUE(F.is_identity(F.multiply(F.parse("a"), F.parse("a^-1"))));

  Group K = Group::klein();
  Element b = KleinElement{1, 0}, a = KleinElement{0, 1};
  EXPECT_EQ(std::get<KleinElement>(K.multiply(b, a)), (KleinElement{1, 1}));
  EXPECT_EQ(std::get<KleinElement>(K.multiply(a, b)), (KleinElement{1, -1}));

  Group A = Group::affine();
  Element x = AffineElement(2, 0), y = AffineElement(1, 3);
  EXPECT_EQ(std::get<AffineElement>(A.multiply(x, y)), AffineElement(2, 6));
}

TEST(Groups, Inverses) {
  Group B = Group::braid(3);
  EXPECT_EQ(std::get<BraidWord>(B.invert(B.parse("s1 s2"))), std::get<BraidWord>(B.parse("s2^-1 s1^-1")));
  Group A = Group::affine();
  EXPECT_EQ(std::get<AffineElement>(A.invert(AffineElement(2, 6))), AffineElement(Rational(1, 2), -3));
  Group Z = Group::zn(2);
  EXPECT_EQ(std::get<ZnVector>(Z.invert(ZnVector({3, -1}))), ZnVector({-3, 1}));
}

TEST(Groups, KleinParsing) {
  Group K = Group::klein();
  EXPECT_EQ(std::get<KleinElement>(K.parse("b a b^-1")), (KleinElement{0, -1}));
  EXPECT_EQ(std::get<KleinElement>(K.parse("a b")), (KleinElement{1, -1}));
  EXPECT_EQ(std::get<KleinElement>(K.parse("")), (KleinElement{0, 0}));
}

TEST(Groups, ParseErrors) {
  EXPECT_THROW(Group::braid(3).parse("s3"), ParseError);
  EXPECT_THROW(Group::braid(3).parse("s1^x"), ParseError);
  EXPECT_THROW(Group::zn(2).parse("(1,2,3)"), ParseError);
  EXPECT_THROW(Group::free(2).parse("c"), ParseError);
  EXPECT_THROW(parse_group("q7"), ParseError);
  EXPECT_EQ(parse_group("b4"), Group::braid(4));
}

TEST(Groups, FormatRoundTrip) {
  std::mt19937 rng(3u);
  for (const Group& G : {Group::free(2), Group::braid(4), Group::zn(3), Group::affine(), Group::klein()}) {
    for (const auto& g : ball(G, 3)) {
      Element back = G.parse(G.format(g));
      ASSERT_TRUE(G.equal(back, g)) << G.format(g);
    }
  }
}

TEST(Balls, SmallCounts) {
  EXPECT_EQ(ball(Group::zn(2), 1).size(), 5u);
  EXPECT_EQ(ball(Group::zn(1), 2).size(), 5u);
  EXPECT_EQ(ball(Group::braid(3), 0).size(), 1u);
}

// B_3 radius 2 by brute force over all words, deduplicated with the Artin action.
TEST(Balls, BraidRadiusTwoMatchesBruteForce) {
  std::set<std::vector<oracle::FWord>> distinct;
  const std::vector<BraidLetter> alphabet = {{1, 1}, {1, -1}, {2, 1}, {2, -1}};
  distinct.insert(oracle::artin_images(BraidWord(3)));
  for (const auto& x : alphabet) {
    distinct.insert(oracle::artin_images(BraidWord(3, {x})));
    for (const auto& y : alphabet) distinct.insert(oracle::artin_images(BraidWord(3, {x, y})));
  }
  EXPECT_EQ(ball(Group::braid(3), 2).size(), distinct.size());
}

TEST(Balls, CapRaisesResourceError) { EXPECT_THROW(ball(Group::free(3), 10, 1000), ResourceError); }

TEST(Balls, Monotone) {
  for (const Group& G : {Group::braid(3), Group::klein(), Group::affine()}) {
    Ball b(G, 4);
    for (int r = 0; r < 4; ++r) {
      auto smaller = ball(G, r);
      ASSERT_EQ(smaller.size(), b.count_within(r));
      for (std::size_t i = 0; i < smaller.size(); ++i) ASSERT_TRUE(G.equal(smaller[i], b[i]));
    }
    EXPECT_TRUE(G.is_identity(b[0]));
  }
}

namespace {

Element random_element(std::mt19937& rng, const Group& G, int len) {
  std::uniform_int_distribution<std::size_t> pick(0, G.generators().size() - 1);
  std::uniform_int_distribution<int> l(0, len);
  Element e = G.identity();
  const int n = l(rng);
  for (int i = 0; i < n; ++i) e = G.multiply(e, G.generators()[pick(rng)]);
  return e;
}

}  // namespace

TEST(GroupProperty, AssociativityAndInvolution) {
  std::mt19937 rng(5u);
  for (const Group& G : {Group::free(2), Group::braid(4), Group::zn(3), Group::affine(), Group::klein()}) {
    for (int k = 0; k < 1000; ++k) {
      Element g = random_element(rng, G, 6), h = random_element(rng, G, 6), x = random_element(rng, G, 6);
      ASSERT_TRUE(G.equal(G.multiply(G.multiply(g, h), x), G.multiply(g, G.multiply(h, x)))) << G.name();
      ASSERT_TRUE(G.equal(G.invert(G.invert(g)), g));
      ASSERT_TRUE(G.is_identity(G.multiply(g, G.invert(g))));
      if (G.equal(g, h)) ASSERT_EQ(G.hash(g), G.hash(h));
    }
  }
}

TEST(GroupProperty, KleinRelation) {
  Group K = Group::klein();
  Element a = K.parse("a"), b = K.parse("b");
  EXPECT_EQ(std::get<KleinElement>(K.multiply(b, K.multiply(a, K.invert(b)))), std::get<KleinElement>(K.invert(a)));
}

TEST(GroupProperty, BraidEqualityHashConsistent) {
  std::mt19937 rng(8u);
  Group B = Group::braid(4);
  for (int k = 0; k < 300; ++k) {
    BraidWord w = oracle::random_braid(rng, 4, 10);
    // same braid, different word
    BraidWord v = BraidWord(4, {{2, 1}, {3, 1}, {2, 1}, {3, -1}, {2, -1}, {3, -1}}) * w;
    ASSERT_TRUE(B.equal(v, w));
    ASSERT_EQ(B.hash(v), B.hash(w));
  }
}
