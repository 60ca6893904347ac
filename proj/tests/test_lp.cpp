#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "spp/evaluation.hpp"
#include "spp/generators.hpp"
#include "spp/lp.hpp"

using namespace spp;
using namespace spp::valuation;
using namespace spp::lp;

namespace {

Rational q(long a, long b = 1) { return ratio(a, b); }

Instance point(std::vector<Rational> v, std::size_t k) {
  std::size_t n = v.size();
  return Instance::make(JointDistribution::make(n, {std::move(v)}, {q(1)}), k);
}

}  // namespace

TEST(RevenueLp, PointMassShape) {
  auto lp = build_revenue_lp(point({q(5)}, 1));
  EXPECT_EQ(lp.num_columns, 1u);
  EXPECT_EQ(lp.objective[0], 5);
  ASSERT_EQ(lp.rows.size(), 2u);
  for (const auto& row : lp.rows) {
    EXPECT_EQ(row.rhs, 1);
    ASSERT_EQ(row.terms.size(), 1u);
    EXPECT_EQ(row.terms[0].second, 1);
  }
}

TEST(RevenueLp, HarmonicCoefficients) {
  auto lp = build_revenue_lp(gen_harmonic(2));
  // Support in canonical order: (1/2), (1).
  EXPECT_EQ(lp.objective[lp.column(0, 0)], q(1, 2));
  EXPECT_EQ(lp.objective[lp.column(0, 1)], q(1, 2));
}

TEST(RevenueLp, CorrelatedPairCoefficients) {
  auto inst = gen_correlated_pair(4, 2);
  auto lp = build_revenue_lp(inst);
  EXPECT_EQ(lp.num_columns, 8u);
  for (std::size_t row = 0; row < inst.pi.size(); ++row) {
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_EQ(lp.objective[lp.column(i, row)], q(1, 4) * inst.pi.support(row)[i]);
    }
  }
}

TEST(RevenueLp, ObjectiveCoefficientInvariant) {
  for (const auto& inst : fixtures::random_limited()) {
    auto lp = build_revenue_lp(inst);
    EXPECT_EQ(lp.num_columns, inst.n * inst.pi.size());
    for (std::size_t row = 0; row < inst.pi.size(); ++row) {
      const auto& v = inst.pi.support(row);
      for (std::size_t i = 0; i < inst.n; ++i) {
        Rational others(0);
        Rational at_least(0);
        for (std::size_t r = 0; r < inst.pi.size(); ++r) {
          const auto& w = inst.pi.support(r);
          if (drop(w, i) != drop(v, i)) continue;
          others += inst.pi.mass(r);
          if (w[i] >= v[i]) at_least += inst.pi.mass(r);
        }
        EXPECT_EQ(lp.objective[lp.column(i, row)], others * (at_least / others) * v[i]);
      }
    }
  }
}

TEST(Simplex, TrivialProgram) {
  LinearProgram lp;
  lp.num_columns = 1;
  lp.objective = {q(3)};
  lp.rows.push_back({{{0, q(1)}}, q(1), "cap"});
  auto sol = solve_simplex(lp);
  EXPECT_EQ(sol.status, Status::kOptimal);
  EXPECT_EQ(sol.y[0], 1);
  EXPECT_EQ(sol.value, 3);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram infeasible;
  infeasible.num_columns = 1;
  infeasible.objective = {q(1)};
  infeasible.rows.push_back({{{0, q(1)}}, q(1), "upper"});
  infeasible.rows.push_back({{{0, q(-1)}}, q(-2), "lower"});
  EXPECT_EQ(solve_simplex(infeasible).status, Status::kInfeasible);

  LinearProgram unbounded;
  unbounded.num_columns = 2;
  unbounded.objective = {q(1), q(0)};
  unbounded.rows.push_back({{{0, q(1)}, {1, q(-1)}}, q(1), "diff"});
  EXPECT_EQ(solve_simplex(unbounded).status, Status::kUnbounded);
}

TEST(Simplex, PhaseOneWithLowerBounds) {
  // max x + y s.t. x + y <= 4, x >= 1 (as -x <= -1), y <= 2.
  LinearProgram lp;
  lp.num_columns = 2;
  lp.objective = {q(1), q(2)};
  lp.rows.push_back({{{0, q(1)}, {1, q(1)}}, q(4), "sum"});
  lp.rows.push_back({{{0, q(-1)}}, q(-1), "floor"});
  lp.rows.push_back({{{1, q(1)}}, q(2), "cap"});
  auto sol = solve_simplex(lp);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_EQ(sol.value, 6);
  EXPECT_FALSE(check_feasible(lp, sol.y));
}

TEST(Simplex, KnownValues) {
  EXPECT_EQ(solve_simplex(build_revenue_lp(gen_harmonic(4))).value, q(1, 4));
  EXPECT_EQ(solve_simplex(build_revenue_lp(gen_correlated_pair(4, 2))).value, q(25, 24));
}

TEST(ClosedForm, Examples) {
  auto p = closed_form_unlimited(point({q(5)}, 1));
  EXPECT_EQ(p.value, 5);
  EXPECT_EQ(p.y[0], 1);
  auto h = closed_form_unlimited(gen_harmonic(4));
  EXPECT_EQ(h.value, q(1, 4));
  // Canonical order puts 1/4 first; every price ties, the smallest wins.
  EXPECT_EQ(h.y[0], 1);
  for (std::size_t row = 1; row < 4; ++row) EXPECT_EQ(h.y[row], 0);
  EXPECT_EQ(closed_form_unlimited(gen_correlated_pair(4, 2)).value, q(25, 24));
  EXPECT_THROW(closed_form_unlimited(gen_correlated_pair(4, 1)), std::invalid_argument);
}

TEST(ClosedForm, AgreesWithSimplexAndIsFeasible) {
  for (const auto& inst : fixtures::random_unlimited()) {
    auto program = build_revenue_lp(inst);
    auto closed = closed_form_unlimited(inst);
    auto simplex = solve_simplex(program);
    ASSERT_EQ(simplex.status, Status::kOptimal);
    EXPECT_EQ(closed.value, simplex.value);
    EXPECT_FALSE(check_feasible(program, closed.y));
    EXPECT_FALSE(check_feasible(program, simplex.y));
    EXPECT_EQ(objective_value(program, simplex.y), simplex.value);
  }
}

TEST(UpperBound, Examples) {
  EXPECT_EQ(revenue_upper_bound(point({q(2), q(3)}, 2)), 5);
  EXPECT_EQ(revenue_upper_bound(gen_correlated_pair(64, 2)), 2 * harmonic_number(64) / 64);
  auto modular = gen_modular(3, 4, q(1, 100));
  EXPECT_GE(revenue_upper_bound(modular), eval::expected_osw(modular.pi, 3));
}

TEST(UpperBound, LimitedFixturesFeasibleAndBelowWelfare) {
  for (const auto& inst : fixtures::random_limited()) {
    auto program = build_revenue_lp(inst);
    auto sol = solve_simplex(program);
    ASSERT_EQ(sol.status, Status::kOptimal);
    EXPECT_FALSE(check_feasible(program, sol.y));
    for (const auto& y : sol.y) {
      EXPECT_GE(y, 0);
      EXPECT_LE(y, 1);
    }
    EXPECT_LE(sol.value, eval::expected_osw(inst.pi, inst.k));
  }
}

TEST(UpperBound, ScalingCovariance) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto inst = gen_random(3, 12, fixtures::grid(), 1 + seed % 3, seed);
    Rational c = q(7, 3);
    std::vector<Valuation> support;
    for (auto v : inst.pi.support()) {
      for (auto& x : v) x *= c;
      support.push_back(v);
    }
    auto scaled = Instance::make(JointDistribution::make(3, support, inst.pi.mass()), inst.k);
    EXPECT_EQ(revenue_upper_bound(scaled), c * revenue_upper_bound(inst));
  }
}

TEST(LpDump, PlainTextFormat) {
  std::ostringstream out;
  write_lp(out, build_revenue_lp(gen_harmonic(2)));
  std::string text = out.str();
  EXPECT_EQ(text.rfind("maximize:", 0), 0u);
  EXPECT_NE(text.find("1/2 y[0,0]"), std::string::npos);
  EXPECT_NE(text.find("<= 1"), std::string::npos);
}
