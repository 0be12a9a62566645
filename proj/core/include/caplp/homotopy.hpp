#pragma once

#include <span>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/field.hpp"

namespace caplp {

/// phi_q = phi^{(q+k-1)/(p+k-1)}. Throws std::invalid_argument if phi <= 0 anywhere.
std::vector<double> phi_q(std::span<const double> phi, double q, const CapParams& params);
CapField phi_q(const CapField& phi, double q, const CapParams& params);

/// Exponent schedule along the continuation path: 1 on [0, 1/2], then
/// 1 + (p-1)(2t-1) on [1/2, 1].
double homotopy_exponent(double t, double p);

/// Pointwise right-hand side H(t, .) of the continuation path:
///   ((1-2t) + 2t phi^{-1/(p+k-1)})^{-k}   for t <= 1/2,
///   phi^{(q(t)+k-1)/(p+k-1)}              for t >= 1/2.
double homotopy_value(double t, double phi, const CapParams& params);

struct HomotopyRhs {
  double q = 1.0;
  std::vector<double> rhs;
};

/// Throws std::invalid_argument for t outside [0, 1] or non-positive phi.
HomotopyRhs homotopy_rhs(double t, std::span<const double> phi, const CapParams& params);

}  // namespace caplp
