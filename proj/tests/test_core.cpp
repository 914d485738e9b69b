#include <gtest/gtest.h>

#include "cubecover/core.hpp"
#include "support/oracles.hpp"

using namespace cubecover;

namespace {

Hyperplane plane(const char* text) { return Hyperplane::parse(text); }

std::vector<std::vector<int>> supports(const std::vector<CubePoint>& pts) {
  std::vector<std::vector<int>> out;
  for (const auto& p : pts) out.push_back(p.support());
  return out;
}

}  // namespace

// Frozen values first.

TEST(PointWeight, FrozenValues) {
  EXPECT_EQ(point_weight(CubePoint::from_support(6, {1, 4})), Rational(1, 30));
  EXPECT_EQ(point_weight(CubePoint::from_support(3, {1, 2, 3})), Rational(1, 3));
  EXPECT_EQ(point_weight(CubePoint::from_support(5, {2})), Rational(1, 5));
}

TEST(PointWeight, OriginRejected) {
  try {
    CubePoint(4, 0);
    FAIL() << "origin accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPoint);
  }
  EXPECT_THROW(CubePoint::from_support(3, {4}), Error);
  EXPECT_THROW(CubePoint::from_support(3, {}), Error);
}

TEST(CoveredPoints, FrozenValues) {
  using S = std::vector<std::vector<int>>;
  EXPECT_EQ(supports(covered_points(plane("1,1"))), (S{{1}, {2}}));
  EXPECT_EQ(supports(covered_points(plane("2,-1"))), (S{{1, 2}}));
  EXPECT_EQ(supports(covered_points(plane("2,1,1"))), (S{{2}, {3}}));
  EXPECT_TRUE(covered_points(plane("0,0,0")).empty());
}

TEST(PlaneWeight, FrozenValues) {
  EXPECT_EQ(plane_weight(plane("1,1")), 1);
  EXPECT_EQ(plane_weight(plane("2,1,1")), Rational(2, 3));
  EXPECT_EQ(plane_weight(plane("1/2,1/2")), Rational(1, 2));
  EXPECT_EQ(plane_weight(plane("0,0")), 0);
}

TEST(Classifier, FrozenValues) {
  auto v = classify_weight1(plane("1,1,-1,0,1"));
  EXPECT_TRUE(v.is_weight1);
  EXPECT_TRUE(v.failed_conditions.empty());

  v = classify_weight1(plane("2,1,1"));
  EXPECT_FALSE(v.is_weight1);
  EXPECT_EQ(v.failed_conditions, std::vector<Weight1Condition>{Weight1Condition::CoeffAboveOne});

  v = classify_weight1(plane("1/2,1/2"));
  EXPECT_FALSE(v.is_weight1);
  EXPECT_EQ(v.failed_conditions, std::vector<Weight1Condition>{Weight1Condition::NonIntegerCoeff});

  v = classify_weight1(plane("3/2,-1/2,-1"));
  EXPECT_TRUE(v.failed(Weight1Condition::CoeffAboveOne));
  EXPECT_TRUE(v.failed(Weight1Condition::SumBelowOne));
  EXPECT_TRUE(v.failed(Weight1Condition::NonIntegerCoeff));
}

TEST(StabilityGap, FrozenValues) {
  EXPECT_EQ(stability_gap(plane("1,1,1,0,-1,-1")), 0);
  EXPECT_EQ(stability_gap(plane("2,1,1")), Rational(1, 3));
  EXPECT_EQ(stability_gap(plane("0,0")), 1);
}

TEST(RationalText, Grammar) {
  EXPECT_EQ(parse_rational("-3/2"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("+4/6"), Rational(2, 3));
  EXPECT_EQ(parse_rational("2"), 2);
  EXPECT_EQ(format_rational(Rational(-3, 2)), "-3/2");
  for (const char* bad : {"", "1/0", "1.5", "a", "1/", "/2", "--1", "1/-2"}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
  EXPECT_EQ(Hyperplane::parse("1, -1/2 ,0").coeffs(), (std::vector<Rational>{1, Rational(-1, 2), 0}));
  EXPECT_EQ(Hyperplane::parse("1 -1/2 0"), Hyperplane::parse("1,-1/2,0"));
}

TEST(CanonicalOrder, CardinalityThenLex) {
  auto subs = canonical_subsets(3);
  std::vector<std::vector<int>> got;
  for (auto m : subs) got.push_back(CubePoint(3, m).support());
  std::vector<std::vector<int>> want = {{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
  EXPECT_EQ(got, want);
}

TEST(TotalWeight, EqualsHarmonic) {
  for (int n = 1; n <= 12; ++n) {
    Rational h = 0;
    for (int s = 1; s <= n; ++s) h += Rational(1, s);
    Rational sum = 0;
    for (auto m : canonical_subsets(n)) sum += point_weight(CubePoint(n, m));
    EXPECT_EQ(sum, h) << n;
    EXPECT_EQ(total_vertex_weight(n), h) << n;
  }
}

TEST(CoveredPoints, LargeCoefficientsTakeExactPath) {
  Hyperplane h({Rational(mpz_class("100000000000000000000001"), mpz_class("100000000000000000000000")),
                Rational(mpz_class("-1"), mpz_class("100000000000000000000000")), 1});
  EXPECT_EQ(supports(covered_points(h)), (std::vector<std::vector<int>>{{3}, {1, 2}}));
}

// Properties over the random population.

TEST(CoreProperties, CoveredPointsMatchBruteForce) {
  oracle::PlaneGenerator gen(11);
  for (int n = 1; n <= 6; ++n)
    for (int i = 0; i < 500; ++i) {
      Hyperplane h = gen.next(n);
      ASSERT_EQ(supports(covered_points(h)), oracle::covered_supports(h)) << h.to_string();
      ASSERT_EQ(plane_weight(h), oracle::weight(h)) << h.to_string();
    }
}

TEST(CoreProperties, WeightAtMostOneAndDichotomy) {
  oracle::PlaneGenerator gen(20230);
  int heavy = 0, gap_hits = 0;
  for (int n = 1; n <= 6; ++n) {
    const Rational ceiling = Rational(1) - Rational(1, n);
    for (int i = 0; i < 2000; ++i) {
      Hyperplane h = gen.next(n);
      const Rational w = plane_weight(h);
      ASSERT_LE(w, 1) << h.to_string();
      const bool one = classify_weight1(h).is_weight1;
      if (one) {
        ASSERT_EQ(w, 1) << h.to_string();
        ++heavy;
      } else {
        ASSERT_LE(w, ceiling) << h.to_string();
        if (w == ceiling) ++gap_hits;
      }
    }
  }
  EXPECT_GT(heavy, 100);
  EXPECT_GT(gap_hits, 10);
}

TEST(CoreProperties, DichotomyOnExhaustiveHalfIntegerBox) {
  // Every vector with entries in {-2, -3/2, ..., 2} for n <= 4.
  std::vector<Rational> values;
  for (int t = -4; t <= 4; ++t) values.push_back(Rational(t, 2));
  for (auto& v : values) v.canonicalize();
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      std::vector<Rational> c;
      for (auto i : idx) c.push_back(values[i]);
      Hyperplane h(c);
      const Rational w = plane_weight(h);
      if (classify_weight1(h).is_weight1)
        ASSERT_EQ(w, 1) << h.to_string();
      else
        ASSERT_LE(w, Rational(1) - Rational(1, n)) << h.to_string();
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == values.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
}

TEST(CoreProperties, PiFamilyMeetsTheBound) {
  // x_1 + ... + x_{n-1} + c x_n = 1 with c outside {-(n-1), ..., 1} sits exactly at 1 - 1/n.
  for (int n = 2; n <= 8; ++n)
    for (Rational c : {Rational(2), Rational(-n), Rational(1, 2), Rational(-7, 3)}) {
      std::vector<Rational> coeffs(static_cast<std::size_t>(n - 1), Rational(1));
      coeffs.push_back(c);
      EXPECT_EQ(plane_weight(Hyperplane(coeffs)), Rational(1) - Rational(1, n)) << n << " " << c;
    }
}
