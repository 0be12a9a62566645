#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "caplp/samples.hpp"
#include "caplp/solver.hpp"

using namespace caplp;

namespace {

constexpr double pi = std::numbers::pi;

CapField manufactured_phi(const GridPtr& g, const CapParams& P, double r) {
  return CapField::sample(
      g, [&](double b, double) { return binom(P.n, P.k) * std::pow(r, P.k + 1 - P.p) * std::pow(ell(P.theta, b), 1 - P.p); },
      true);
}

CapField scaled_ell(const GridPtr& g, double c) {
  return CapField::sample(g, model_function(g->theta()).scaled(c));
}

}  // namespace

TEST(Linearize, BoundaryRowAnnihilatesModel) {
  const GridPtr g = make_grid(32, 64, pi / 3);
  const CapField l = scaled_ell(g, 1.0);
  const std::vector<double> rhs(g->size(), 1.0);
  const SparseMatrix J = linearize(l, 1.0, rhs, 1);
  Eigen::Map<const Eigen::VectorXd> v(l.values().data(), static_cast<Eigen::Index>(g->size()));
  const Eigen::VectorXd Jv = J * v;
  for (int j = 0; j < g->n_phi(); ++j) EXPECT_LT(std::abs(Jv[g->node(g->rim_row(), j)]), 1e-3);
}

TEST(Linearize, SigmaOneIsLaplacianPlusTwo) {
  const GridPtr g = make_grid(32, 64, pi / 3);
  const CapField s = scaled_ell(g, 0.7);
  const std::vector<double> rhs(g->size(), 1.0);
  const SparseMatrix J = linearize(s, 1.0, rhs, 1);
  const CapField v = CapField::sample(g, [](double b, double p) { return std::cos(b) + 0.2 * std::sin(b) * std::sin(b) * std::cos(2 * p); });
  Eigen::Map<const Eigen::VectorXd> vv(v.values().data(), static_cast<Eigen::Index>(g->size()));
  const Eigen::VectorXd Jv = J * vv;
  const TauField tv = tau_sharp(v);
  for (int i = 0; i < g->n_beta(); ++i) {
    for (int j = 0; j < g->n_phi(); j += 5) {
      // sigma_1 is linear, so D v = tr tau#[v] = Lap v + 2 v.
      EXPECT_NEAR(Jv[g->node(i, j)], tv.at(i, j).trace(), 1e-9);
    }
  }
  const double b = g->beta(10);
  const double lap = -std::cos(b) * 2 + 0.2 * (2 * std::cos(2 * b) + std::cos(b) / std::sin(b) * 2 * std::sin(b) * std::cos(b) - 4.0) * std::cos(0.0);
  EXPECT_NEAR(Jv[g->node(10, 0)], lap + 2 * v(10, 0), 5e-3);
}

TEST(Linearize, ConeExitIsReported) {
  const GridPtr g = make_grid(16, 32, pi / 3);
  const CapField bad = CapField::sample(g, [](double b, double) { return 1.0 - 3.0 * b * b; });
  const std::vector<double> rhs(g->size(), 1.0);
  EXPECT_THROW(linearize(bad, 1.0, rhs, 1), ConeExitError);
}

TEST(Linearize, FiniteDifferenceConsistency) {
  const GridPtr g = make_grid(32, 64, pi / 3);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CapField s = CapField::sample(g, random_convex_test_function(pi / 3, seed, 0.3));
    const CapField v = CapField::sample(g, random_convex_test_function(pi / 3, seed + 50, 0.3));
    const std::vector<double> rhs(g->size(), 1.3);
    for (int k = 1; k <= 2; ++k) {
      const JacobianCheck c = jacobian_fd_check(s, v, 1.4, rhs, k);
      EXPECT_LT(c.rel_error, 1e-5) << "seed " << seed << " k " << k;
      const JacobianCheck c2 = jacobian_fd_check(s, v, 1.4, rhs, k, 1e-5);
      EXPECT_GT(c2.abs_error, c.abs_error);  // O(eps)
    }
  }
}

TEST(CapProblem, EvenRestrictionRoundTrip) {
  const GridPtr g = make_grid(16, 32, pi / 3);
  const CapParams P{2, 1, 1.5, pi / 3};
  CapProblem prob(P, CapField::constant(g, 1.0));
  EXPECT_EQ(prob.size(), 17 * 16);
  const CapField s = CapField::sample(g, random_convex_test_function(pi / 3, 4, 0.2));
  const CapField back = prob.expand(prob.restrict_even(s));
  EXPECT_LT(max_abs_diff(back, s), 1e-14);
  EXPECT_THROW(CapProblem(CapParams{3, 1, 1.5, pi / 3}, CapField::constant(g, 1.0)), std::invalid_argument);
  EXPECT_THROW(CapProblem(P, CapField::constant(g, -1.0)), std::invalid_argument);
}

TEST(NewtonStep, FixedPointAtExactSolution) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(32, 64, P.theta);
  CapProblem prob(P, CapField::constant(g, 1.0));
  prob.set_parameter(0.0);
  // Polish the discrete t = 0 solution, then step once more.
  const NewtonOutcome sol = solve_newton(prob, prob.restrict_even(initial_iterate(g, P)), NewtonOptions{});
  ASSERT_TRUE(sol.converged);
  const HomotopyState st = prob.state(sol.x);
  const CapStepOutcome out = newton_step(prob, st, NewtonOptions{});
  EXPECT_TRUE(out.accepted || out.residual_norm <= 1e-9);
  EXPECT_LE(max_abs_diff(out.state.s, st.s), 1e-9);
  EXPECT_LE(sol.residual_history.size(), 6u);
}

TEST(NewtonStep, QuadraticConvergenceFromPerturbedStart) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(32, 64, P.theta);
  CapProblem prob(P, CapField::constant(g, 1.0));
  prob.set_parameter(0.0);
  const CapField exact = initial_iterate(g, P);
  NewtonOptions o;
  o.tol = 1e-12;
  const NewtonOutcome sol = solve_newton(prob, prob.restrict_even(1.05 * exact), o);
  ASSERT_TRUE(sol.converged);
  const auto& h = sol.residual_history;
  ASSERT_GE(h.size(), 3u);
  // Residual ratios r_{i+1} / r_i^2 stay bounded while above roundoff.
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (h[i + 1] > 1e-10) EXPECT_LT(h[i + 1] / (h[i] * h[i]), 50.0);
  }
  EXPECT_LT(max_abs_diff(prob.expand(sol.x), exact), 1e-3);  // discretization level
  EXPECT_NEAR(initial_iterate(g, P)(0, 0), 0.5 * ell(P.theta, g->beta(0)), 1e-15);
}

TEST(SolvePath, ManufacturedCapRecovered) {
  const CapParams P{2, 1, 1.5, pi / 3};
  double prev = 0.0;
  for (int nb : {16, 32}) {
    const GridPtr g = make_grid(nb, 2 * nb, P.theta);
    const SolveResult r = solve_path(manufactured_phi(g, P, 1.3), P);
    ASSERT_EQ(r.report.status, SolveStatus::converged) << r.report.message;
    EXPECT_LE(r.report.interior_residual, 1e-9);
    EXPECT_GT(r.report.lambda1_min, 0.0);
    for (const auto& st : r.report.steps) EXPECT_GT(st.lambda1_min, 0.0);
    const double err = max_abs_diff(r.solution, scaled_ell(g, 1.3));
    if (prev > 0.0) EXPECT_GT(prev / err, 3.5);
    prev = err;
    EXPECT_EQ(r.report.steps.front().t, 0.0);
    EXPECT_EQ(r.report.steps.back().t, 1.0);
    EXPECT_EQ(r.report.steps.back().q, P.p);
  }
}

TEST(SolvePath, ModelDataGivesModelSolution) {
  const CapParams P{2, 1, 1.5, pi / 4};
  const GridPtr g = make_grid(32, 64, P.theta);
  const SolveResult r = solve_path(manufactured_phi(g, P, 1.0), P);
  ASSERT_EQ(r.report.status, SolveStatus::converged);
  EXPECT_LT(max_abs_diff(r.solution, scaled_ell(g, 1.0)), 1e-3);
}

TEST(SolvePath, SigmaTwoManufactured) {
  const CapParams P{2, 2, 2.0, pi / 3};
  const GridPtr g = make_grid(32, 64, P.theta);
  const SolveResult r = solve_path(manufactured_phi(g, P, 0.8), P);
  ASSERT_EQ(r.report.status, SolveStatus::converged) << r.report.message;
  EXPECT_LT(max_abs_diff(r.solution, scaled_ell(g, 0.8)), 1e-3);
}

TEST(SolvePath, ResidualHistoryHasQuadraticTail) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(32, 64, P.theta);
  SolverOptions o;
  o.newton.tol = 1e-11;
  const SolveResult r = solve_path(manufactured_phi(g, P, 1.3), P, o);
  ASSERT_EQ(r.report.status, SolveStatus::converged);
  bool quadratic = false;
  for (const auto& h : r.report.newton_histories) {
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
      if (h[i] < 1e-3 && h[i + 1] > 1e-13 && h[i + 1] < 10 * h[i] * h[i]) quadratic = true;
    }
  }
  EXPECT_TRUE(quadratic);
}

TEST(SolvePath, RejectsBadInput) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(16, 32, P.theta);
  EXPECT_THROW(solve_path(CapField::constant(g, 1.0), CapParams{2, 1, 3.0, pi / 3}), std::invalid_argument);
  EXPECT_THROW(solve_path(CapField::constant(g, 0.0), P), std::invalid_argument);
  EXPECT_THROW(solve_path(CapField::constant(g, 1.0), CapParams{2, 1, 1.5, pi / 4}), std::invalid_argument);
  const CapField odd = CapField::sample(g, [](double b, double p) { return 1.0 + 0.1 * std::sin(b) * std::cos(p); });
  EXPECT_THROW(solve_path(odd, P), std::invalid_argument);
}

TEST(SolvePath, StallIsReportedNotThrown) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(16, 32, P.theta);
  SolverOptions o;
  o.newton.max_iterations = 1;
  o.schedule.dt0 = 0.5;
  o.schedule.dt_min = 0.2;
  const SolveResult r = solve_path(manufactured_phi(g, P, 1.3), P, o);
  EXPECT_EQ(r.report.status, SolveStatus::stalled);
  EXPECT_FALSE(r.report.message.empty());
  EXPECT_LT(r.report.stalled_at, 1.0);
}

TEST(StructuralCheck, ConstantDataPasses) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(32, 64, P.theta);
  const StructuralReport r = structural_hypothesis_check(CapField::constant(g, 4.0), P);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.interior_margin, std::pow(4.0, -1.0 / 1.5), 1e-9);
  EXPECT_GT(r.boundary_margin, 0.0);
}

TEST(StructuralCheck, ManufacturedDataIsReported) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(32, 64, P.theta);
  const StructuralReport r = structural_hypothesis_check(manufactured_phi(g, P, 1.3), P);
  EXPECT_TRUE(std::isfinite(r.interior_margin));
  EXPECT_TRUE(std::isfinite(r.boundary_margin));
}

TEST(StructuralCheck, SharpBumpFailsInterior) {
  const CapParams P{2, 1, 1.5, pi / 3};
  const GridPtr g = make_grid(32, 64, P.theta);
  const CapField bump = CapField::sample(g, [](double b, double) { return 1.0 + 20.0 * std::exp(-b * b / 0.01); }, true);
  const StructuralReport r = structural_hypothesis_check(bump, P);
  EXPECT_FALSE(r.interior_pass);
  EXPECT_LT(r.interior_margin, 0.0);
}
