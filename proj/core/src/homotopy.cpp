#include "caplp/homotopy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace caplp {

namespace {

void require_positive(std::span<const double> phi) {
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (!(phi[n] > 0.0)) {
      throw std::invalid_argument("phi must be positive; value " + std::to_string(phi[n]) +
                                  " at node " + std::to_string(n));
    }
  }
}

}  // namespace

std::vector<double> phi_q(std::span<const double> phi, double q, const CapParams& params) {
  require_positive(phi);
  const double e = (q + params.k - 1.0) / (params.p + params.k - 1.0);
  std::vector<double> out(phi.size());
  for (std::size_t n = 0; n < phi.size(); ++n) out[n] = std::pow(phi[n], e);
  return out;
}

CapField phi_q(const CapField& phi, double q, const CapParams& params) {
  return CapField(phi.grid_ptr(), phi_q(phi.values(), q, params), phi.even());
}

double homotopy_exponent(double t, double p) {
  if (t >= 1.0) return p;
  return t <= 0.5 ? 1.0 : 1.0 + (p - 1.0) * (2.0 * t - 1.0);
}

double homotopy_value(double t, double phi, const CapParams& params) {
  const double pk = params.p + params.k - 1.0;
  if (t <= 0.5) {
    return std::pow((1.0 - 2.0 * t) + 2.0 * t * std::pow(phi, -1.0 / pk), -params.k);
  }
  return std::pow(phi, (homotopy_exponent(t, params.p) + params.k - 1.0) / pk);
}

HomotopyRhs homotopy_rhs(double t, std::span<const double> phi, const CapParams& params) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("homotopy parameter t must lie in [0, 1], got " + std::to_string(t));
  }
  require_positive(phi);
  HomotopyRhs out;
  out.q = homotopy_exponent(t, params.p);
  out.rhs.resize(phi.size());
  for (std::size_t n = 0; n < phi.size(); ++n) out.rhs[n] = homotopy_value(t, phi[n], params);
  return out;
}

}  // namespace caplp
