#pragma once

#include <cstdint>
#include <vector>

namespace caplp {

/// Problem parameters (n, k, p, theta) of the capillary L_p equation
///   sigma_k(tau#[s]) = s^{p-1} phi  on the cap,  d_mu s = cot(theta) s  on its rim.
struct CapParams {
  int n = 2;
  int k = 1;
  double p = 1.5;
  double theta = 1.0471975511965976;

  /// Throws std::invalid_argument unless n >= 2, 1 <= k <= n, 1 < p < k+1, 0 < theta < pi/2.
  void validate() const;
};

/// Binomial coefficient C(n, k) as a double; zero outside 0 <= k <= n.
double binom(int n, int k);

/// Point of the unshifted cap S^n_theta in polar coordinates about e_{n+1}.
/// The capillary cap C_theta is identified with it through zeta = u - cos(theta) e_{n+1}.
struct CapPoint {
  double beta = 0.0;
  double phi = 0.0;
};

/// Model capillary support function in chart form, 1 - cos(theta) cos(beta).
double ell(double theta, double beta);
double ell(const CapParams& params, CapPoint pt);

/// Same value through the ambient formula sin^2(theta) - cos(theta) <zeta, e_{n+1}>.
double ell_ambient(double theta, double beta);

struct ChartMetric {
  double g_bb = 1.0;
  double g_bp = 0.0;
  double g_pp = 0.0;
  bool at_pole = false;  // azimuthal component degenerate; use the pole closure
};

/// Round metric of S^2 in (beta, phi).
ChartMetric chart_metric(CapPoint pt, double pole_tol = 1e-12);

/// Evenness reflection R(x_1, .., x_n, x_{n+1}) = (-x_1, .., -x_n, x_{n+1}).
/// In the chart it is phi -> phi + pi (mod 2 pi); the pole is fixed.
CapPoint reflect_even(CapPoint pt);

/// Value and first/second derivatives of a scalar function of one variable.
struct Jet1 {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;
};

Jet1 operator+(Jet1 a, Jet1 b);
Jet1 operator*(Jet1 a, Jet1 b);
Jet1 operator*(double c, Jet1 a);

/// Value and all derivatives up to order two of a field in (beta, phi).
struct LocalJet {
  double s = 0.0;
  double b = 0.0;   // d/dbeta
  double p = 0.0;   // d/dphi
  double bb = 0.0;
  double bp = 0.0;
  double pp = 0.0;

  LocalJet& operator+=(const LocalJet& o);
  LocalJet& operator*=(double c);
};

LocalJet operator+(LocalJet a, const LocalJet& b);
LocalJet operator*(double c, LocalJet a);
LocalJet operator*(const LocalJet& f, const LocalJet& g);

/// One azimuthal mode  amp * cos(m (phi - phase)) * sin^m(beta) * P(cos beta).
/// The sin^m factor keeps the term smooth through the pole; m even keeps it even.
struct NeumannMode {
  int m = 0;
  double amp = 0.0;
  double phase = 0.0;
  std::vector<double> poly;  // P(x) = sum poly[i] x^i

  LocalJet jet(double beta, double phi) const;
};

/// Smooth even factor v = c0 + sum of modes. A capillary test function is ell * v,
/// which satisfies the Robin condition whenever d_beta v = 0 on the rim.
class NeumannFactor {
 public:
  NeumannFactor() = default;
  explicit NeumannFactor(double c0, std::vector<NeumannMode> modes = {});

  LocalJet jet(double beta, double phi) const;
  double value(double beta, double phi) const { return jet(beta, phi).s; }

  double constant() const { return c0_; }
  const std::vector<NeumannMode>& modes() const { return modes_; }

  NeumannFactor scaled(double c) const;
  NeumannFactor shifted(double t) const;

  /// max_phi |d_beta v(theta, phi)| sampled on n_phi azimuths.
  double neumann_defect(double theta, int n_phi = 256) const;

  /// Mode with radial factor sin^m(b) (cos b - cos theta)^2 (c0 + c1 cos b); its
  /// beta-derivative vanishes at theta for any (c0, c1).
  static NeumannMode rim_flat_mode(double theta, int m, double amp, double phase,
                                   double c0 = 1.0, double c1 = 0.0);

  /// Seeded random even factor 1 + sum of rim-flat modes with m in {0, 2, 4}
  /// and total amplitude at most eps.
  static NeumannFactor random_even(double theta, std::uint64_t seed, double eps);

 private:
  double c0_ = 1.0;
  std::vector<NeumannMode> modes_;
};

/// Analytic capillary field s = ell * v with exact derivatives.
class CapillaryFunction {
 public:
  CapillaryFunction(double theta, NeumannFactor v);

  double theta() const { return theta_; }
  const NeumannFactor& factor() const { return v_; }

  LocalJet jet(double beta, double phi) const;
  double value(double beta, double phi) const { return jet(beta, phi).s; }

  /// Robin defect d_beta s - cot(theta) s at the rim point with azimuth phi.
  double robin_defect(double phi) const;

  CapillaryFunction scaled(double c) const;
  /// Capillary parallel body s + t ell.
  CapillaryFunction parallel(double t) const;

 private:
  double theta_;
  NeumannFactor v_;
};

/// Builds s = ell * v. Throws std::invalid_argument if v violates the Neumann
/// condition on the rim by more than tol, or if v has an odd azimuthal mode.
CapillaryFunction make_capillary_test_function(const CapParams& params, NeumannFactor v,
                                               double tol = 1e-10);

/// ell as an analytic capillary function (v == 1).
CapillaryFunction model_function(double theta);

}  // namespace caplp
