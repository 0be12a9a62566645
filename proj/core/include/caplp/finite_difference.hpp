#pragma once

#include <span>
#include <vector>

namespace caplp {

/// Finite-difference weights for the derivative of the given order at x0 from
/// values on arbitrary distinct nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

}  // namespace caplp
