#include "caplp/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "caplp/cap_geometry.hpp"

namespace caplp {

std::array<double, 2> SymEndo::eigenvalues() const {
  const double mean = 0.5 * (a11 + a22);
  const double rad = std::hypot(0.5 * (a11 - a22), a12);
  return {mean - rad, mean + rad};
}

SymEndo& SymEndo::operator+=(const SymEndo& o) {
  a11 += o.a11;
  a12 += o.a12;
  a22 += o.a22;
  return *this;
}

SymEndo& SymEndo::operator*=(double c) {
  a11 *= c;
  a12 *= c;
  a22 *= c;
  return *this;
}

SymEndo operator+(SymEndo a, const SymEndo& b) { return a += b; }
SymEndo operator-(SymEndo a, const SymEndo& b) { return a += (-1.0) * b; }
SymEndo operator*(double c, SymEndo a) { return a *= c; }

double sigma_k(std::span<const double> lambda, int k) {
  if (k < 0 || k > static_cast<int>(lambda.size())) return 0.0;
  // e[j] holds sigma_j of the prefix processed so far.
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (double l : lambda) {
    for (int j = k; j >= 1; --j) e[j] += l * e[j - 1];
  }
  return e[k];
}

double sigma_k_without(std::span<const double> lambda, int k, std::size_t i) {
  std::vector<double> rest;
  rest.reserve(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (j != i) rest.push_back(lambda[j]);
  }
  return sigma_k(rest, k);
}

double sigma_k(const SymEndo& a, int k) {
  switch (k) {
    case 0:
      return 1.0;
    case 1:
      return a.trace();
    case 2:
      return a.det();
    default:
      return 0.0;
  }
}

namespace {

SymEndo product(const SymEndo& a, const SymEndo& b) {
  // Powers of one symmetric matrix commute, so the product stays symmetric.
  return {a.a11 * b.a11 + a.a12 * b.a12, a.a11 * b.a12 + a.a12 * b.a22,
          a.a12 * b.a12 + a.a22 * b.a22};
}

}  // namespace

SymEndo sigma_k_grad(const SymEndo& a, int k) {
  SymEndo grad{0.0, 0.0, 0.0};
  SymEndo power = SymEndo::identity();
  double sign = 1.0;
  for (int m = 0; m < k; ++m) {
    grad += (sign * sigma_k(a, k - 1 - m)) * power;
    power = product(power, a);
    sign = -sign;
  }
  return grad;
}

ConeExitError::ConeExitError(int j, double sigma_j)
    : std::runtime_error("left the Garding cone: sigma_" + std::to_string(j) + " = " +
                         std::to_string(sigma_j)),
      order_(j),
      value_(sigma_j) {}

bool in_garding_cone(const SymEndo& a, int k, double margin) {
  for (int j = 1; j <= k; ++j) {
    if (!(sigma_k(a, j) > margin)) return false;
  }
  return true;
}

FValue F_and_grad(const SymEndo& a, int k, double cone_margin) {
  for (int j = 1; j <= k; ++j) {
    const double sj = sigma_k(a, j);
    if (!(sj > cone_margin)) throw ConeExitError(j, sj);
  }
  const double sk = sigma_k(a, k);
  FValue out;
  out.value = std::pow(sk, 1.0 / k);
  out.grad = ((1.0 / k) * std::pow(sk, 1.0 / k - 1.0)) * sigma_k_grad(a, k);
  return out;
}

double polarize_Qk(std::span<const SymEndo> args, int n) {
  const int k = static_cast<int>(args.size());
  if (k == 0) return 1.0;
  double acc = 0.0;
  const unsigned full = 1u << k;
  for (unsigned mask = 1; mask < full; ++mask) {
    SymEndo sum{0.0, 0.0, 0.0};
    int count = 0;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        sum += args[i];
        ++count;
      }
    }
    const double sign = ((k - count) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * sigma_k(sum, k);
  }
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  return acc / (binom(n, k) * factorial);
}

MaclaurinCheck newton_maclaurin_check(std::span<const double> lambda, int k, double tol) {
  MaclaurinCheck out;
  const int n = static_cast<int>(lambda.size());
  if (k < 2) return out;
  out.lhs = std::pow(sigma_k(lambda, k) / binom(n, k), 1.0 / k);
  out.rhs = std::pow(sigma_k(lambda, k - 1) / binom(n, k - 1), 1.0 / (k - 1));
  out.margin = out.rhs - out.lhs;
  out.pass = out.margin >= -tol * std::max(1.0, std::abs(out.rhs));
  return out;
}

MaclaurinCheck newton_maclaurin_check(const SymEndo& a, int k, double tol) {
  const auto ev = a.eigenvalues();
  return newton_maclaurin_check(std::span<const double>(ev), k, tol);
}

}  // namespace caplp
