#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/symfunc.hpp"

using namespace caplp;

namespace {

SymEndo random_sym(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

SymEndo random_cone(std::mt19937_64& rng, int k) {
  for (;;) {
    const SymEndo a = random_sym(rng);
    if (in_garding_cone(a, k, 1e-3)) return a;
  }
}

}  // namespace

TEST(SigmaK, SpecExamples) {
  EXPECT_EQ(sigma_k(SymEndo::identity(), 1), 2.0);
  EXPECT_EQ(sigma_k(SymEndo::identity(), 2), 1.0);
  EXPECT_EQ(sigma_k(SymEndo::diag(3, 5), 2), 15.0);
  EXPECT_EQ(sigma_k(SymEndo::diag(3, 5), 0), 1.0);
}

TEST(SigmaK, EigenvalueList) {
  const std::array<double, 4> l{1, 2, 3, 4};
  EXPECT_EQ(sigma_k(l, 1), 10.0);
  EXPECT_EQ(sigma_k(l, 2), 35.0);
  EXPECT_EQ(sigma_k(l, 3), 50.0);
  EXPECT_EQ(sigma_k(l, 4), 24.0);
  EXPECT_EQ(sigma_k(l, 5), 0.0);
  EXPECT_EQ(sigma_k_without(l, 2, 0), 2 * 3 + 2 * 4 + 3 * 4);
}

TEST(Eigenvalues, ClosedFormMatchesInvariants) {
  std::mt19937_64 rng(11);
  for (int r = 0; r < 200; ++r) {
    const SymEndo a = random_sym(rng);
    const auto e = a.eigenvalues();
    EXPECT_LE(e[0], e[1]);
    EXPECT_NEAR(e[0] + e[1], a.trace(), 1e-13);
    EXPECT_NEAR(e[0] * e[1], a.det(), 1e-12);
  }
}

TEST(SigmaKGrad, SpecExamples) {
  const SymEndo g = sigma_k_grad(SymEndo::identity(), 2);
  EXPECT_EQ(g.a11, 1.0);
  EXPECT_EQ(g.a12, 0.0);
  EXPECT_EQ(g.a22, 1.0);
  const SymEndo t = sigma_k_grad(SymEndo::diag(3, 5), 1);
  EXPECT_EQ(t.a11, 1.0);
  EXPECT_EQ(t.a12, 0.0);
  EXPECT_EQ(t.a22, 1.0);
}

TEST(SigmaKGrad, ContractionIdentity) {
  std::mt19937_64 rng(12);
  for (int r = 0; r < 1000; ++r) {
    const SymEndo a = random_sym(rng);
    for (int k = 1; k <= 2; ++k) {
      const double lhs = sigma_k_grad(a, k).contract(a);
      const double rhs = k * sigma_k(a, k);
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(SigmaKGrad, MatchesCentralDifferences) {
  std::mt19937_64 rng(13);
  const double eps = 1e-5;
  for (int r = 0; r < 100; ++r) {
    const SymEndo a = random_sym(rng);
    const SymEndo dir = random_sym(rng, 1.0);
    for (int k = 1; k <= 2; ++k) {
      const double fd = (sigma_k(a + eps * dir, k) - sigma_k(a - eps * dir, k)) / (2 * eps);
      EXPECT_NEAR(sigma_k_grad(a, k).contract(dir), fd, 1e-9);
    }
  }
}

TEST(FAndGrad, SpecExamples) {
  EXPECT_EQ(F_and_grad(SymEndo::identity(), 2).value, 1.0);
  for (double c : {0.5, 2.0, 7.0}) {
    EXPECT_NEAR(F_and_grad(c * SymEndo::identity(), 1).value, c * 2.0, 1e-14);
    EXPECT_NEAR(F_and_grad(c * SymEndo::identity(), 2).value, c, 1e-14);
  }
}

TEST(FAndGrad, ConeExitCarriesViolatedOrder) {
  try {
    F_and_grad(SymEndo::diag(1, -2), 2);
    FAIL() << "expected ConeExitError";
  } catch (const ConeExitError& e) {
    EXPECT_EQ(e.order(), 1);
    EXPECT_EQ(e.value(), -1.0);
  }
  try {
    F_and_grad(SymEndo::diag(3, -1), 2);
    FAIL() << "expected ConeExitError";
  } catch (const ConeExitError& e) {
    EXPECT_EQ(e.order(), 2);
    EXPECT_EQ(e.value(), -3.0);
  }
  EXPECT_NO_THROW(F_and_grad(SymEndo::diag(3, -1), 1));
}

TEST(FAndGrad, GradientPositiveDefiniteAndTraceBound) {
  std::mt19937_64 rng(14);
  for (int k = 1; k <= 2; ++k) {
    const double ck = std::pow(binom(2, k), 1.0 / k);
    for (int r = 0; r < 1000; ++r) {
      const FValue f = F_and_grad(random_cone(rng, k), k);
      EXPECT_GT(f.grad.min_eigenvalue(), 0.0);
      EXPECT_GE(f.grad.trace(), ck - 1e-12);
    }
  }
}

TEST(FAndGrad, ConcaveOnCone) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  for (int k = 1; k <= 2; ++k) {
    for (int r = 0; r < 1000; ++r) {
      const SymEndo a = random_cone(rng, k);
      const SymEndo b = random_cone(rng, k);
      const double t = ut(rng);
      const double mid = F_and_grad(t * a + (1 - t) * b, k).value;
      const double chord = t * F_and_grad(a, k).value + (1 - t) * F_and_grad(b, k).value;
      EXPECT_GE(mid, chord - 1e-12);
    }
  }
}

TEST(PolarizeQk, SpecExamples) {
  const std::array<SymEndo, 2> id{SymEndo::identity(), SymEndo::identity()};
  EXPECT_NEAR(polarize_Qk(id, 2), 1.0, 1e-14);
  const std::array<SymEndo, 2> aa{SymEndo::diag(3, 5), SymEndo::diag(3, 5)};
  EXPECT_NEAR(polarize_Qk(aa, 2), 15.0, 1e-12);
  const std::array<SymEndo, 1> one{SymEndo::identity()};
  EXPECT_NEAR(polarize_Qk(one, 2), 1.0, 1e-15);
}

TEST(PolarizeQk, MixedDeterminantOracle) {
  std::mt19937_64 rng(16);
  for (int r = 0; r < 200; ++r) {
    const SymEndo a = random_sym(rng);
    const SymEndo b = random_sym(rng);
    const std::array<SymEndo, 2> args{a, b};
    const double oracle = 0.5 * (a.a11 * b.a22 + a.a22 * b.a11 - 2 * a.a12 * b.a12);
    EXPECT_NEAR(polarize_Qk(args, 2), oracle, 1e-12);
    EXPECT_NEAR(polarize_Qk(args, 2), 0.5 * ((a + b).det() - a.det() - b.det()), 1e-12);
  }
}

TEST(PolarizeQk, SymmetricAndMultilinear) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uc(-2.0, 2.0);
  for (int r = 0; r < 200; ++r) {
    const SymEndo a = random_sym(rng);
    const SymEndo b = random_sym(rng);
    const SymEndo c = random_sym(rng);
    const double x = uc(rng);
    const double y = uc(rng);
    const std::array<SymEndo, 2> ab{a, b};
    const std::array<SymEndo, 2> ba{b, a};
    EXPECT_NEAR(polarize_Qk(ab, 2), polarize_Qk(ba, 2), 1e-12);
    const std::array<SymEndo, 2> comb{x * a + y * c, b};
    const std::array<SymEndo, 2> cb{c, b};
    EXPECT_NEAR(polarize_Qk(comb, 2), x * polarize_Qk(ab, 2) + y * polarize_Qk(cb, 2), 1e-11);
  }
}

TEST(NewtonMaclaurin, SpecExamples) {
  const MaclaurinCheck eq = newton_maclaurin_check(SymEndo::identity(), 2);
  EXPECT_TRUE(eq.pass);
  EXPECT_NEAR(eq.margin, 0.0, 1e-15);
  const MaclaurinCheck d = newton_maclaurin_check(SymEndo::diag(1, 4), 2);
  EXPECT_TRUE(d.pass);
  EXPECT_NEAR(d.lhs, 2.0, 1e-15);
  EXPECT_NEAR(d.rhs, 2.5, 1e-15);
  EXPECT_TRUE(newton_maclaurin_check(SymEndo::diag(1, 4), 1).pass);
}

TEST(NewtonMaclaurin, HoldsOnTenThousandConeSamples) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  int failures = 0;
  for (int r = 0; r < 10000; ++r) {
    std::vector<double> l(2 + r % 3);
    for (double& x : l) x = u(rng);
    const int k = 2 + r % (static_cast<int>(l.size()) - 1);
    if (!newton_maclaurin_check(l, k).pass) ++failures;
  }
  EXPECT_EQ(failures, 0);
}
