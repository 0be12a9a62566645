#pragma once

#include <array>
#include <span>
#include <stdexcept>

namespace caplp {

/// Symmetric endomorphism of a 2-dimensional tangent space, stored in an
/// orthonormal frame.
struct SymEndo {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  static SymEndo identity() { return {1.0, 0.0, 1.0}; }
  static SymEndo diag(double l1, double l2) { return {l1, 0.0, l2}; }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a12; }

  /// Eigenvalues in ascending order (closed-form quadratic).
  std::array<double, 2> eigenvalues() const;
  double min_eigenvalue() const { return eigenvalues()[0]; }

  /// Frobenius contraction sum_ij a_ij b_ij.
  double contract(const SymEndo& b) const { return a11 * b.a11 + 2 * a12 * b.a12 + a22 * b.a22; }

  SymEndo& operator+=(const SymEndo& o);
  SymEndo& operator*=(double c);
};

SymEndo operator+(SymEndo a, const SymEndo& b);
SymEndo operator-(SymEndo a, const SymEndo& b);
SymEndo operator*(double c, SymEndo a);

/// Elementary symmetric polynomial sigma_k of a list of eigenvalues; sigma_0 = 1.
double sigma_k(std::span<const double> lambda, int k);

/// sigma_k of the eigenvalues with the i-th removed, sigma_k(lambda | i).
double sigma_k_without(std::span<const double> lambda, int k, std::size_t i);

double sigma_k(const SymEndo& a, int k);

/// d sigma_k / d a_ij, via sum_{m<k} (-1)^m sigma_{k-1-m}(A) A^m.
/// Satisfies contract(sigma_k_grad(A,k), A) == k sigma_k(A).
SymEndo sigma_k_grad(const SymEndo& a, int k);

/// Thrown when a matrix leaves the Garding cone Gamma_k.
class ConeExitError : public std::runtime_error {
 public:
  ConeExitError(int j, double sigma_j);
  int order() const { return order_; }
  double value() const { return value_; }

 private:
  int order_;
  double value_;
};

/// True if sigma_j(A) > margin for all 1 <= j <= k.
bool in_garding_cone(const SymEndo& a, int k, double margin = 1e-10);

struct FValue {
  double value = 0.0;  // sigma_k^{1/k}
  SymEndo grad;        // F^{ij} = (1/k) sigma_k^{1/k - 1} sigma_k^{ij}
};

/// F = sigma_k^{1/k} and its gradient. Throws ConeExitError outside Gamma_k.
FValue F_and_grad(const SymEndo& a, int k, double cone_margin = 1e-10);

/// Symmetric multilinear polarization of sigma_k / C(n, k) with k = args.size(),
/// by inclusion-exclusion over subset sums.
double polarize_Qk(std::span<const SymEndo> args, int n = 2);

struct MaclaurinCheck {
  bool pass = true;
  double lhs = 0.0;  // (sigma_k / C(n,k))^{1/k}
  double rhs = 0.0;  // (sigma_{k-1} / C(n,k-1))^{1/(k-1)}
  double margin = 0.0;
};

/// Newton-Maclaurin step between orders k-1 and k (k >= 2); trivially passes for k = 1.
MaclaurinCheck newton_maclaurin_check(std::span<const double> lambda, int k, double tol = 1e-12);
MaclaurinCheck newton_maclaurin_check(const SymEndo& a, int k, double tol = 1e-12);

}  // namespace caplp
