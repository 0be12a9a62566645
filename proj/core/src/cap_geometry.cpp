#include "caplp/cap_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace caplp {

void CapParams::validate() const {
  if (n < 2) {
    throw std::invalid_argument("n must be >= 2, got " + std::to_string(n));
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("k must satisfy 1 <= k <= n, got k=" + std::to_string(k) +
                                " n=" + std::to_string(n));
  }
  if (!(p > 1.0 && p < k + 1.0)) {
    throw std::invalid_argument("p must satisfy 1 < p < k+1, got p=" + std::to_string(p) +
                                " k=" + std::to_string(k));
  }
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
    throw std::invalid_argument("theta must lie in (0, pi/2), got " + std::to_string(theta));
  }
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double ell(double theta, double beta) { return 1.0 - std::cos(theta) * std::cos(beta); }

double ell(const CapParams& params, CapPoint pt) { return ell(params.theta, pt.beta); }

double ell_ambient(double theta, double beta) {
  // <zeta, e_{n+1}> = cos(beta) - cos(theta) after the translation T.
  const double zeta_z = std::cos(beta) - std::cos(theta);
  const double st = std::sin(theta);
  return st * st - std::cos(theta) * zeta_z;
}

ChartMetric chart_metric(CapPoint pt, double pole_tol) {
  ChartMetric g;
  const double sb = std::sin(pt.beta);
  g.g_pp = sb * sb;
  g.at_pole = std::abs(sb) <= pole_tol;
  return g;
}

CapPoint reflect_even(CapPoint pt) {
  if (pt.beta == 0.0) return pt;
  double phi = std::fmod(pt.phi + std::numbers::pi, 2 * std::numbers::pi);
  if (phi < 0) phi += 2 * std::numbers::pi;
  return {pt.beta, phi};
}

Jet1 operator+(Jet1 a, Jet1 b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }

Jet1 operator*(Jet1 a, Jet1 b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2 * a.d * b.d + a.v * b.dd};
}

Jet1 operator*(double c, Jet1 a) { return {c * a.v, c * a.d, c * a.dd}; }

LocalJet& LocalJet::operator+=(const LocalJet& o) {
  s += o.s;
  b += o.b;
  p += o.p;
  bb += o.bb;
  bp += o.bp;
  pp += o.pp;
  return *this;
}

LocalJet& LocalJet::operator*=(double c) {
  s *= c;
  b *= c;
  p *= c;
  bb *= c;
  bp *= c;
  pp *= c;
  return *this;
}

LocalJet operator+(LocalJet a, const LocalJet& b) { return a += b; }

LocalJet operator*(double c, LocalJet a) { return a *= c; }

LocalJet operator*(const LocalJet& f, const LocalJet& g) {
  LocalJet r;
  r.s = f.s * g.s;
  r.b = f.b * g.s + f.s * g.b;
  r.p = f.p * g.s + f.s * g.p;
  r.bb = f.bb * g.s + 2 * f.b * g.b + f.s * g.bb;
  r.bp = f.bp * g.s + f.b * g.p + f.p * g.b + f.s * g.bp;
  r.pp = f.pp * g.s + 2 * f.p * g.p + f.s * g.pp;
  return r;
}

namespace {

Jet1 radial_factor(int m, const std::vector<double>& poly, double beta) {
  const Jet1 sin_j{std::sin(beta), std::cos(beta), -std::sin(beta)};
  const Jet1 cos_j{std::cos(beta), -std::sin(beta), -std::cos(beta)};
  Jet1 r{1.0, 0.0, 0.0};
  for (int i = 0; i < m; ++i) r = r * sin_j;
  Jet1 pv{0.0, 0.0, 0.0};
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) pv = pv * cos_j + Jet1{*it, 0.0, 0.0};
  return r * pv;
}

}  // namespace

LocalJet NeumannMode::jet(double beta, double phi) const {
  const Jet1 r = radial_factor(m, poly, beta);
  const double arg = m * (phi - phase);
  const double f = amp * std::cos(arg);
  const double fd = -amp * m * std::sin(arg);
  const double fdd = -amp * m * m * std::cos(arg);
  LocalJet j;
  j.s = f * r.v;
  j.b = f * r.d;
  j.p = fd * r.v;
  j.bb = f * r.dd;
  j.bp = fd * r.d;
  j.pp = fdd * r.v;
  return j;
}

NeumannFactor::NeumannFactor(double c0, std::vector<NeumannMode> modes)
    : c0_(c0), modes_(std::move(modes)) {}

LocalJet NeumannFactor::jet(double beta, double phi) const {
  LocalJet j;
  j.s = c0_;
  for (const auto& mode : modes_) j += mode.jet(beta, phi);
  return j;
}

NeumannFactor NeumannFactor::scaled(double c) const {
  NeumannFactor out = *this;
  out.c0_ *= c;
  for (auto& mode : out.modes_) mode.amp *= c;
  return out;
}

NeumannFactor NeumannFactor::shifted(double t) const {
  NeumannFactor out = *this;
  out.c0_ += t;
  return out;
}

double NeumannFactor::neumann_defect(double theta, int n_phi) const {
  double worst = 0.0;
  for (int j = 0; j < n_phi; ++j) {
    const double phi = 2 * std::numbers::pi * j / n_phi;
    worst = std::max(worst, std::abs(jet(theta, phi).b));
  }
  return worst;
}

NeumannMode NeumannFactor::rim_flat_mode(double theta, int m, double amp, double phase,
                                         double c0, double c1) {
  // (x - c)^2 (c0 + c1 x) with c = cos(theta), expanded in powers of x.
  const double c = std::cos(theta);
  NeumannMode mode;
  mode.m = m;
  mode.amp = amp;
  mode.phase = phase;
  mode.poly = {c * c * c0, c * c * c1 - 2 * c * c0, c0 - 2 * c * c1, c1};
  return mode;
}

NeumannFactor NeumannFactor::random_even(double theta, std::uint64_t seed, double eps) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::vector<NeumannMode> modes;
  for (int m : {0, 2, 4}) {
    const double c1 = 0.5 * unit(rng);
    NeumannMode mode = rim_flat_mode(theta, m, 1.0, angle(rng), 1.0, c1);
    // Normalise the radial factor to unit sup norm on [0, theta].
    double peak = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double beta = theta * i / 200.0;
      peak = std::max(peak, std::abs(radial_factor(m, mode.poly, beta).v));
    }
    mode.amp = (eps / 3.0) * unit(rng) / (peak > 0 ? peak : 1.0);
    modes.push_back(std::move(mode));
  }
  return NeumannFactor(1.0, std::move(modes));
}

CapillaryFunction::CapillaryFunction(double theta, NeumannFactor v)
    : theta_(theta), v_(std::move(v)) {}

LocalJet CapillaryFunction::jet(double beta, double phi) const {
  const double c = std::cos(theta_);
  LocalJet l;
  l.s = 1.0 - c * std::cos(beta);
  l.b = c * std::sin(beta);
  l.bb = c * std::cos(beta);
  return l * v_.jet(beta, phi);
}

double CapillaryFunction::robin_defect(double phi) const {
  const LocalJet j = jet(theta_, phi);
  return j.b - j.s / std::tan(theta_);
}

CapillaryFunction CapillaryFunction::scaled(double c) const {
  return CapillaryFunction(theta_, v_.scaled(c));
}

CapillaryFunction CapillaryFunction::parallel(double t) const {
  return CapillaryFunction(theta_, v_.shifted(t));
}

CapillaryFunction make_capillary_test_function(const CapParams& params, NeumannFactor v,
                                               double tol) {
  for (const auto& mode : v.modes()) {
    if (mode.m % 2 != 0) {
      throw std::invalid_argument("odd azimuthal mode m=" + std::to_string(mode.m) +
                                  " is not even under the reflection");
    }
  }
  const double defect = v.neumann_defect(params.theta);
  if (defect > tol) {
    throw std::invalid_argument("Neumann factor violates d_beta v = 0 on the rim (defect " +
                                std::to_string(defect) + ")");
  }
  return CapillaryFunction(params.theta, std::move(v));
}

CapillaryFunction model_function(double theta) {
  return CapillaryFunction(theta, NeumannFactor(1.0));
}

}  // namespace caplp
