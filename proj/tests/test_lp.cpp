#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "cubecover/catalog.hpp"
#include "cubecover/fraction.hpp"
#include "cubecover/simplex.hpp"
#include "cubecover/solver.hpp"

using namespace cubecover;

namespace {

Fraction frac(long n, long d) {
  mpq_class q(n, d);
  q.canonicalize();
  return Fraction(q);
}

mpq_class random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mode(0, 3);
  auto big = [&] { return static_cast<long>(rng() >> 1) * (rng() & 1 ? 1 : -1); };
  std::uniform_int_distribution<long> small(-50, 50), den(1, 40);
  mpq_class q;
  switch (mode(rng)) {
    case 0: q = mpq_class(small(rng), den(rng)); break;
    case 1: q = mpq_class(big(), den(rng)); break;
    case 2: q = mpq_class(small(rng), static_cast<unsigned long>(rng() >> 2) + 1); break;
    default: q = mpq_class(mpz_class(big()) * big(), mpz_class(big()) * 3 + 1); break;
  }
  q.canonicalize();
  return q;
}

/// max sum y subject to y^T A <= 1, y >= 0, by enumerating every vertex of the polytope.
/// Equals the covering LP optimum by duality.
Rational dual_vertex_optimum(const CoverInstance& inst) {
  const std::size_t m = inst.rows.size(), v = inst.num_vars();
  // Constraint list: plane columns (sum over rows containing it <= 1) then y_i >= 0.
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (std::size_t h = 0; h < v; ++h) {
    std::vector<Rational> row(m, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (std::find(inst.rows[i].begin(), inst.rows[i].end(), static_cast<int>(h)) != inst.rows[i].end()) row[i] = 1;
    a.push_back(row);
    b.push_back(1);
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(m, 0);
    row[i] = -1;
    a.push_back(row);
    b.push_back(0);
  }
  std::optional<Rational> best;
  std::vector<int> pick(a.size(), 0);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(m), pick.end(), 1);
  do {
    std::vector<std::vector<Rational>> sys;
    for (std::size_t r = 0; r < a.size(); ++r)
      if (pick[r]) {
        auto row = a[r];
        row.push_back(b[r]);
        sys.push_back(row);
      }
    bool singular = false;
    for (std::size_t c = 0; c < m && !singular; ++c) {
      std::size_t p = c;
      while (p < m && sys[p][c] == 0) ++p;
      if (p == m) {
        singular = true;
        break;
      }
      std::swap(sys[p], sys[c]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == c || sys[r][c] == 0) continue;
        Rational f = sys[r][c] / sys[c][c];
        for (std::size_t k = c; k <= m; ++k) sys[r][k] -= f * sys[c][k];
      }
    }
    if (singular) continue;
    std::vector<Rational> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = sys[i][m] / sys[i][i];
    bool feasible = true;
    for (std::size_t r = 0; r < a.size() && feasible; ++r) {
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i) s += a[r][i] * y[i];
      feasible = s <= b[r];
    }
    if (!feasible) continue;
    Rational obj = 0;
    for (const auto& yi : y) obj += yi;
    if (!best || obj > *best) best = obj;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return *best;
}

template <class Field>
LinearProgram<Field> convert(const LinearProgram<LpField>& lp) {
  LinearProgram<Field> out;
  out.num_vars = lp.num_vars;
  for (const auto& c : lp.objective) out.objective.push_back(Field(c.to_mpq()));
  for (const auto& r : lp.rows) {
    LinearRow<Field> row;
    row.sense = r.sense;
    row.rhs = Field(r.rhs.to_mpq());
    for (const auto& [j, a] : r.terms) row.terms.emplace_back(j, Field(a.to_mpq()));
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

TEST(Fraction, Basics) {
  EXPECT_EQ(frac(2, 4), frac(1, 2));
  EXPECT_EQ(frac(1, 2) + frac(1, 3), frac(5, 6));
  EXPECT_EQ(frac(1, 2) * frac(2, 3), frac(1, 3));
  EXPECT_EQ(frac(1, 2) / frac(-1, 4), Fraction(-2));
  EXPECT_TRUE(frac(-1, 3) < 0);
  EXPECT_TRUE(Fraction(3) == 3);
  EXPECT_THROW(frac(1, 2) / Fraction(0), std::domain_error);
}

TEST(Fraction, PromotesAndDemotes) {
  const long top = std::numeric_limits<long>::max();
  Fraction a(top);
  Fraction b = a + Fraction(1);
  EXPECT_FALSE(b.is_small());
  EXPECT_EQ(b.to_mpq(), mpq_class(mpz_class(top) + 1));
  Fraction c = b - Fraction(1);
  EXPECT_TRUE(c.is_small());
  EXPECT_EQ(c, a);
  Fraction lo(std::numeric_limits<long>::min());
  EXPECT_EQ((-lo).to_mpq(), -mpq_class(mpz_class(std::numeric_limits<long>::min())));
}

TEST(Fraction, AgreesWithGmp) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200000; ++i) {
    mpq_class x = random_rational(rng), y = random_rational(rng);
    Fraction fx(x), fy(y);
    ASSERT_EQ((fx + fy).to_mpq(), mpq_class(x + y));
    ASSERT_EQ((fx - fy).to_mpq(), mpq_class(x - y));
    ASSERT_EQ((fx * fy).to_mpq(), mpq_class(x * y));
    if (sgn(y) != 0) {
      ASSERT_EQ((fx / fy).to_mpq(), mpq_class(x / y));
    }
    ASSERT_EQ(fx < fy, x < y);
    ASSERT_EQ(fx == fy, x == y);
    ASSERT_EQ((-fx).to_mpq(), mpq_class(-x));
  }
}

TEST(Simplex, SmallProgram) {
  // min x + y  s.t.  x + 2y >= 2, 3x + y >= 3, x <= 5, x - y = 0
  LinearProgram<Rational> lp;
  lp.num_vars = 2;
  lp.objective = {1, 1};
  lp.rows.push_back({{{0, 1}, {1, 2}}, RowSense::GreaterEqual, 2});
  lp.rows.push_back({{{0, 3}, {1, 1}}, RowSense::GreaterEqual, 3});
  lp.rows.push_back({{{0, 1}}, RowSense::LessEqual, 5});
  lp.rows.push_back({{{0, 1}, {1, -1}}, RowSense::Equal, 0});
  for (auto rule : {PricingRule::Bland, PricingRule::DantzigWithBland}) {
    Tableau<Rational> t(lp, rule);
    ASSERT_EQ(t.solve(), LpStatus::Optimal);
    EXPECT_EQ(t.value(), Rational(3, 2));
    EXPECT_EQ(t.primal(), (std::vector<Rational>{Rational(3, 4), Rational(3, 4)}));
  }
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram<Rational> lp;
  lp.num_vars = 1;
  lp.objective = {1};
  lp.rows.push_back({{{0, 1}}, RowSense::GreaterEqual, 3});
  lp.rows.push_back({{{0, 1}}, RowSense::LessEqual, 2});
  EXPECT_EQ(Tableau<Rational>(lp).solve(), LpStatus::Infeasible);

  LinearProgram<Rational> un;
  un.num_vars = 2;
  un.objective = {-1, 0};
  un.rows.push_back({{{0, 1}, {1, -1}}, RowSense::LessEqual, 1});
  EXPECT_EQ(Tableau<Rational>(un).solve(), LpStatus::Unbounded);
}

TEST(Simplex, WarmStartMatchesColdSolve) {
  auto inst = build_instance(4, 2, enumerate_maximal(4));
  auto lp = cover_program(inst);
  Tableau<LpField> warm(lp);
  ASSERT_EQ(warm.solve(), LpStatus::Optimal);
  auto x = warm.primal();
  int var = -1;
  for (std::size_t j = 0; j < x.size() && var < 0; ++j)
    if (!(x[j] == 0)) var = static_cast<int>(j);
  ASSERT_GE(var, 0);
  LinearRow<LpField> cut{{{var, LpField(1)}}, RowSense::LessEqual, LpField(0)};
  warm.add_row_and_reoptimize(cut);
  auto cold_lp = lp;
  cold_lp.rows.push_back(cut);
  Tableau<LpField> cold(cold_lp);
  cold.solve();
  ASSERT_EQ(warm.status(), cold.status());
  EXPECT_EQ(warm.value(), cold.value());
  EXPECT_TRUE(warm.primal()[static_cast<std::size_t>(var)] == 0);
}

TEST(LpRelax, FrozenValues) {
  auto r = lp_relax(build_instance(3, 1, enumerate_maximal(3)));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.objective, Rational(11, 6));

  PlaneCatalog empty;
  empty.dimension = 2;
  EXPECT_EQ(lp_relax(build_instance(2, 1, empty)).status, LpStatus::Infeasible);
}

TEST(LpRelax, N6K20Weight1IsFortyNine) {
  auto r = lp_relax(build_instance(6, 20, enumerate_weight1(6)));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.objective, 49);
}

TEST(LpRelax, AgreesWithVertexEnumeration) {
  EXPECT_EQ(dual_vertex_optimum(build_instance(3, 1, enumerate_maximal(3))), Rational(11, 6));
  for (int n = 2; n <= 3; ++n)
    for (auto kind : {CatalogKind::Weight1, CatalogKind::Maximal}) {
      auto cat = kind == CatalogKind::Weight1 ? enumerate_weight1(n) : enumerate_maximal(n);
      const Rational unit = dual_vertex_optimum(build_instance(n, 1, cat));
      for (long k = 1; k <= 3; ++k) EXPECT_EQ(lp_relax(build_instance(n, k, cat)).objective, unit * k) << n << " " << k;
    }
}

TEST(LpRelax, OptimumIsHarmonicTimesK) {
  for (int n = 1; n <= 5; ++n)
    for (long k : {1L, 2L, 7L}) {
      Rational h = 0;
      for (int s = 1; s <= n; ++s) h += Rational(1, s);
      EXPECT_EQ(lp_relax(build_instance(n, k, enumerate_maximal(n))).objective, h * k) << n << " " << k;
      EXPECT_EQ(lp_relax(build_instance(n, k, enumerate_weight1(n))).objective, h * k) << n << " " << k;
    }
}

TEST(LpRelax, SolutionSatisfiesRowsExactly) {
  auto inst = build_instance(4, 3, enumerate_maximal(4));
  auto r = lp_relax(inst);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  Rational total = 0;
  for (const auto& v : r.x) {
    EXPECT_GE(v, 0);
    total += v;
  }
  EXPECT_EQ(total, r.objective);
  for (const auto& row : inst.rows) {
    Rational s = 0;
    for (int h : row) s += r.x[static_cast<std::size_t>(h)];
    EXPECT_GE(s, inst.k);
  }
}

TEST(Simplex, PricingRulesAgree) {
  std::mt19937 rng(5);
  for (int n = 2; n <= 4; ++n) {
    auto cat = enumerate_maximal(n);
    for (int trial = 0; trial < 6; ++trial) {
      // Random sub-catalogs give instances with differing optima (or infeasibility).
      PlaneCatalog sub;
      sub.dimension = n;
      sub.kind = CatalogKind::Maximal;
      for (const auto& h : cat.planes)
        if (rng() % 3) sub.planes.push_back(h);
      auto inst = build_instance(n, static_cast<long>(1 + rng() % 4), sub);
      auto lp = cover_program(inst);
      Tableau<LpField> dantzig(lp, PricingRule::DantzigWithBland);
      Tableau<LpField> bland(lp, PricingRule::Bland);
      Tableau<Rational> gmp(convert<Rational>(lp), PricingRule::Bland);
      auto s1 = dantzig.solve(), s2 = bland.solve(), s3 = gmp.solve();
      ASSERT_EQ(s1, s2);
      ASSERT_EQ(s1, s3);
      ASSERT_EQ(s1 == LpStatus::Infeasible, has_empty_row(inst));
      if (s1 != LpStatus::Optimal) continue;
      EXPECT_EQ(dantzig.value(), bland.value());
      EXPECT_EQ(dantzig.value().to_mpq(), gmp.value());
      EXPECT_LT(bland.pivots(), kPivotSanityCap);
    }
  }
}
