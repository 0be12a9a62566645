#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "caplp/cap_geometry.hpp"
#include "caplp/field.hpp"
#include "caplp/finite_difference.hpp"
#include "caplp/samples.hpp"

using namespace caplp;

namespace {

constexpr double pi = std::numbers::pi;

CapillaryFunction bumped_ell(double theta, double eps = 0.05) {
  return CapillaryFunction(theta, NeumannFactor(1.0, {NeumannFactor::rim_flat_mode(theta, 2, eps, 0.0)}));
}

double tau_error_vs_exact(const CapillaryFunction& f, int nb) {
  const GridPtr g = make_grid(nb, 2 * nb, f.theta());
  const TauField t = tau_sharp(CapField::sample(g, f));
  double err = 0.0;
  for (int i = 0; i < g->n_beta(); ++i) {
    for (int j = 0; j < g->n_phi(); ++j) {
      const SymEndo ex = tau_from_jet(f.jet(g->beta(i), g->phi(j)), g->beta(i));
      const SymEndo d = t.at(i, j) - ex;
      err = std::max({err, std::abs(d.a11), std::abs(d.a12), std::abs(d.a22)});
    }
  }
  return err;
}

}  // namespace

TEST(FdWeights, ReproducesPolynomials) {
  const std::vector<double> x{-0.7, 0.1, 0.4, 1.3};
  const auto w1 = fd_weights(0.2, x, 1);
  const auto w2 = fd_weights(0.2, x, 2);
  double d1 = 0.0;
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d1 += w1[i] * x[i] * x[i] * x[i];
    d2 += w2[i] * x[i] * x[i] * x[i];
  }
  EXPECT_NEAR(d1, 3 * 0.04, 1e-12);
  EXPECT_NEAR(d2, 6 * 0.2, 1e-12);
}

TEST(CapGrid, LayoutAndValidation) {
  const CapGrid g(16, 32, pi / 3);
  EXPECT_EQ(g.rows(), 17);
  EXPECT_NEAR(g.beta(0), 0.5 * pi / 3 / 16, 1e-16);
  EXPECT_EQ(g.beta(g.rim_row()), pi / 3);
  EXPECT_EQ(g.weight(g.rim_row()), 0.0);
  EXPECT_EQ(g.node(2, 33), g.node(2, 1));
  EXPECT_EQ(g.mirror(g.node(3, 5)), g.node(3, 21));
  EXPECT_THROW(CapGrid(16, 31, pi / 3), std::invalid_argument);
  EXPECT_THROW(CapGrid(4, 32, pi / 3), std::invalid_argument);
  EXPECT_THROW(CapGrid(16, 32, 0.0), std::invalid_argument);
}

TEST(CapGrid, WeightsSumToCapAreaAtSecondOrder) {
  const double area = 2 * pi * (1 - std::cos(pi / 3));
  double prev = 0.0;
  for (int nb : {16, 32, 64}) {
    const double err = std::abs(integrate(CapField::constant(make_grid(nb, 2 * nb, pi / 3), 1.0)) - area);
    if (prev > 0.0) EXPECT_GT(prev / err, 3.5);
    prev = err;
  }
}

TEST(Integrate, SpecExamples) {
  const GridPtr g = make_grid(64, 128, pi / 3);
  EXPECT_NEAR(integrate(CapField::constant(g, 1.0)), pi, 1e-3);
  EXPECT_EQ(integrate(CapField::constant(g, 0.0)), 0.0);
  const double th = pi / 3;
  const double exact = 2 * pi * ((1 - std::cos(th)) - std::cos(th) * std::sin(th) * std::sin(th) / 2);
  EXPECT_NEAR(integrate(CapField::sample(g, model_function(th))), exact, 1e-3);
}

TEST(TauSharp, ModelFunctionIsIdentityToSecondOrder) {
  double prev = 0.0;
  for (int nb : {32, 64, 128}) {
    const GridPtr g = make_grid(nb, 2 * nb, pi / 3);
    const TauField t = tau_sharp(CapField::sample(g, model_function(pi / 3)));
    double dev = 0.0;
    for (const auto& e : t.eig) dev = std::max({dev, std::abs(e[0] - 1), std::abs(e[1] - 1)});
    EXPECT_LT(dev, 1e-3);
    if (prev > 0.0) EXPECT_GT(prev / dev, 3.0);
    prev = dev;
  }
}

TEST(TauSharp, ConstantAndScaledModel) {
  const GridPtr g = make_grid(32, 64, pi / 4);
  const TauField c = tau_sharp(CapField::constant(g, 2.5));
  for (const auto& t : c.tau) {
    EXPECT_NEAR(t.a11, 2.5, 1e-9);
    EXPECT_NEAR(t.a12, 0.0, 1e-9);
    EXPECT_NEAR(t.a22, 2.5, 1e-9);
  }
  const TauField r = tau_sharp(CapField::sample(g, model_function(pi / 4).scaled(1.3)));
  const auto sig = r.sigma(2);
  for (int i = 0; i < g->n_beta(); ++i) EXPECT_NEAR(sig[g->node(i, 3)], 1.69, 1e-3);
  EXPECT_NEAR(r.lambda1_min, 1.3, 1e-3);
}

TEST(TauSharp, SmallPerturbationStaysNearIdentity) {
  const GridPtr g = make_grid(32, 64, pi / 3);
  for (double eps : {0.01, 0.02, 0.04}) {
    const TauField t = tau_sharp(CapField::sample(g, bumped_ell(pi / 3, eps)));
    double dev = 0.0;
    for (const auto& e : t.eig) dev = std::max({dev, std::abs(e[0] - 1), std::abs(e[1] - 1)});
    EXPECT_LT(dev, 40 * eps);
    EXPECT_GT(dev, eps / 10);
  }
}

TEST(TauSharp, MatchesAnalyticJetAtSecondOrder) {
  const CapillaryFunction f = bumped_ell(pi / 3);
  const double e1 = tau_error_vs_exact(f, 16);
  const double e2 = tau_error_vs_exact(f, 32);
  const double e3 = tau_error_vs_exact(f, 64);
  EXPECT_GT(e1 / e2, 3.0);
  EXPECT_GT(e2 / e3, 3.5);
}

TEST(TauSharp, RichardsonAgainstFourTimesFinerGrid) {
  const CapillaryFunction f = bumped_ell(pi / 3);
  auto tau_at = [&](int nb, double b, double ph) {
    const GridPtr g = make_grid(nb, 2 * nb, f.theta());
    const TauField t = tau_sharp(CapField::sample(g, f));
    for (int i = 0; i < g->n_beta(); ++i) {
      if (std::abs(g->beta(i) - b) < 1e-12) {
        for (int j = 0; j < g->n_phi(); ++j) {
          if (std::abs(g->phi(j) - ph) < 1e-12) return t.at(i, j);
        }
      }
    }
    ADD_FAILURE() << "node not found";
    return SymEndo{};
  };
  // beta = (i + 1/2) h is shared by grids 16 and 48 at i = 5 and 17; use 16 vs 48 (3x).
  const double b = 5.5 * (pi / 3) / 16;
  const double ph = 2 * pi * 4 / 32;
  const SymEndo coarse = tau_at(16, b, ph);
  const SymEndo fine = tau_at(48, b, ph);
  const SymEndo exact = tau_from_jet(f.jet(b, ph), b);
  const double ec = std::abs((coarse - exact).a22) + std::abs((coarse - exact).a11);
  const double ef = std::abs((fine - exact).a22) + std::abs((fine - exact).a11);
  EXPECT_GT(ec / ef, 6.0);
  const SymEndo extrap = (9.0 / 8.0) * fine - (1.0 / 8.0) * coarse;
  EXPECT_LT(std::abs((extrap - exact).a11) + std::abs((extrap - exact).a22), ef);
}

TEST(TauSharp, ParallelShiftAddsIdentity) {
  const GridPtr g = make_grid(32, 64, pi / 3);
  const CapillaryFunction f = random_convex_test_function(pi / 3, 5, 0.2);
  const CapField s = CapField::sample(g, f);
  const CapField l = CapField::sample(g, model_function(pi / 3));
  const TauField t0 = tau_sharp(s);
  const TauField tl = tau_sharp(l);
  for (double t : {0.1, 0.5, 1.0}) {
    const TauField ts = tau_sharp(s + t * l);
    for (std::size_t n = 0; n < g->size(); ++n) {
      const SymEndo expect = t0.tau[n] + t * tl.tau[n];
      EXPECT_NEAR(ts.tau[n].a11, expect.a11, 1e-9);
      EXPECT_NEAR(ts.tau[n].a22, expect.a22, 1e-9);
      EXPECT_NEAR(ts.tau[n].a11, t0.tau[n].a11 + t, 5e-3);
    }
  }
}

TEST(RobinResidual, SpecExamples) {
  const double th = pi / 3;
  const GridPtr g = make_grid(32, 64, th);
  for (double r : robin_residual(CapField::constant(g, 1.0))) EXPECT_NEAR(r, -1 / std::tan(th), 1e-12);
  double prev = 0.0;
  for (int nb : {16, 32, 64}) {
    const GridPtr gg = make_grid(nb, 2 * nb, th);
    double m = 0.0;
    for (double r : robin_residual(CapField::sample(gg, bumped_ell(th)))) m = std::max(m, std::abs(r));
    EXPECT_LT(m, 1e-3);
    if (prev > 0.0) EXPECT_GT(prev / m, 3.0);
    prev = m;
  }
  double ml = 0.0;
  for (double r : robin_residual(CapField::sample(g, model_function(th)))) ml = std::max(ml, std::abs(r));
  EXPECT_LT(ml, 1e-4);
}

TEST(BoundaryTauIdentity, ModelAndScaledModelVanish) {
  const GridPtr g = make_grid(64, 128, pi / 3);
  EXPECT_LT(boundary_tau_identity_residual(CapField::sample(g, model_function(pi / 3))), 1e-3);
  EXPECT_LT(boundary_tau_identity_residual(CapField::sample(g, model_function(pi / 3).scaled(1.7))), 2e-3);
}

TEST(BoundaryTauIdentity, DecreasesUnderRefinementForBump) {
  const CapillaryFunction f = bumped_ell(pi / 3);
  double prev = 1e300;
  for (int nb : {32, 64, 128}) {
    const double r = boundary_tau_identity_residual(CapField::sample(make_grid(nb, 2 * nb, pi / 3), f));
    EXPECT_LT(r, prev / 2);  // at least linear
    prev = r;
  }
}

TEST(BoundaryTauIdentity, DecreasesForRandomCapillaryFields) {
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    const CapillaryFunction f = random_convex_test_function(pi / 4, seed, 0.3);
    double prev = 1e300;
    for (int nb : {16, 32, 64}) {
      const double r = boundary_tau_identity_residual(CapField::sample(make_grid(nb, 2 * nb, pi / 4), f));
      EXPECT_LT(r, prev) << "seed " << seed << " nb " << nb;
      prev = r;
    }
  }
}

TEST(ProjectEven, SpecExamples) {
  const GridPtr g = make_grid(16, 32, pi / 3);
  const CapField even = CapField::sample(g, bumped_ell(pi / 3));
  EXPECT_LT(max_abs_diff(project_even(even), even), 1e-15);

  const CapField odd = CapField::sample(g, [](double b, double p) { return 1.0 + 0.3 * std::sin(b) * std::cos(p); });
  const CapField proj = project_even(odd);
  for (double v : proj.values()) EXPECT_NEAR(v, 1.0, 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> vals(g->size());
  for (double& v : vals) v = u(rng);
  const CapField r(g, vals);
  EXPECT_GT(evenness_defect(r), 0.1);
  const CapField pr = project_even(r);
  EXPECT_EQ(evenness_defect(pr), 0.0);
  EXPECT_TRUE(pr.even());
  EXPECT_EQ(max_abs_diff(project_even(pr), pr), 0.0);
}

TEST(CovariantHessian, ModelFunctionGivesMetric) {
  const GridPtr g = make_grid(64, 128, pi / 3);
  const CapField l = CapField::sample(g, model_function(pi / 3));
  const auto h = covariant_hessian(l);
  for (int i = 0; i < g->n_beta(); i += 7) {
    const double b = g->beta(i);
    const std::size_t n = g->node(i, 9);
    const double s = l[n];
    EXPECT_NEAR(h[n].bb + s, 1.0, 1e-3);
    EXPECT_NEAR(h[n].bp, 0.0, 1e-9);
    EXPECT_NEAR((h[n].pp + s * std::sin(b) * std::sin(b)) / (std::sin(b) * std::sin(b)), 1.0, 1e-3);
  }
}
