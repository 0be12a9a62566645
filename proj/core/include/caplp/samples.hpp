#pragma once

#include <cstdint>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/field.hpp"
#include "caplp/symfunc.hpp"

namespace caplp {

/// Quadrature samples of a field over the cap: position, area weight, local
/// derivatives and tau#. Either taken from grid nodes (finite differences) or
/// from an analytic capillary function on a Gauss-Legendre x trapezoid rule.
struct CapSamples {
  double theta = 0.0;
  std::vector<double> beta;
  std::vector<double> phi;
  std::vector<double> weight;
  std::vector<LocalJet> jet;
  std::vector<SymEndo> tau;

  std::size_t size() const { return weight.size(); }
  bool same_layout(const CapSamples& o) const;
  double integrate(const std::vector<double>& f) const;
};

/// Interior grid nodes with midpoint weights and finite-difference derivatives.
CapSamples samples_from_field(const CapField& s);

/// Gauss-Legendre panels in beta (30 nodes each, weight sin beta) times the
/// trapezoid rule in phi.
struct CapQuadrature {
  double theta = 0.0;
  int beta_panels = 2;
  int n_phi = 96;
};

CapSamples samples_from_function(const CapillaryFunction& f, const CapQuadrature& quad);

/// Seeded random even capillary function ell * v whose tau# has minimum
/// eigenvalue at least min_lambda on a check rule. The perturbation size eps is
/// halved until the bound holds.
CapillaryFunction random_convex_test_function(double theta, std::uint64_t seed, double eps,
                                              double min_lambda = 0.25);

/// Minimum eigenvalue of tau# over a sample set.
double min_eigenvalue(const CapSamples& s);

}  // namespace caplp
