#include "caplp/samples.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace caplp {

bool CapSamples::same_layout(const CapSamples& o) const {
  return theta == o.theta && beta == o.beta && phi == o.phi;
}

double CapSamples::integrate(const std::vector<double>& f) const {
  double acc = 0.0;
  for (std::size_t n = 0; n < weight.size(); ++n) acc += weight[n] * f[n];
  return acc;
}

CapSamples samples_from_field(const CapField& s) {
  const CapGrid& g = s.grid();
  CapSamples out;
  out.theta = g.theta();
  for (int i = 0; i < g.n_beta(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      const LocalJet d = derivatives(s, i, j);
      out.beta.push_back(g.beta(i));
      out.phi.push_back(g.phi(j));
      out.weight.push_back(g.weight(i));
      out.jet.push_back(d);
      out.tau.push_back(tau_from_jet(d, g.beta(i)));
    }
  }
  return out;
}

CapSamples samples_from_function(const CapillaryFunction& f, const CapQuadrature& quad) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  if (quad.beta_panels < 1 || quad.n_phi < 4) throw std::invalid_argument("CapQuadrature too small");
  // Expand the symmetric half-rule on [-1, 1].
  std::vector<double> x;
  std::vector<double> w;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    x.push_back(abscissa[i]);
    w.push_back(weights[i]);
    if (abscissa[i] != 0.0) {
      x.push_back(-abscissa[i]);
      w.push_back(weights[i]);
    }
  }
  CapSamples out;
  out.theta = quad.theta;
  const double panel = quad.theta / quad.beta_panels;
  const double hp = 2 * std::numbers::pi / quad.n_phi;
  for (int pnl = 0; pnl < quad.beta_panels; ++pnl) {
    const double mid = (pnl + 0.5) * panel;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double beta = mid + 0.5 * panel * x[q];
      const double wb = 0.5 * panel * w[q] * std::sin(beta);
      for (int j = 0; j < quad.n_phi; ++j) {
        const double phi = j * hp;
        const LocalJet d = f.jet(beta, phi);
        out.beta.push_back(beta);
        out.phi.push_back(phi);
        out.weight.push_back(wb * hp);
        out.jet.push_back(d);
        out.tau.push_back(tau_from_jet(d, beta));
      }
    }
  }
  return out;
}

double min_eigenvalue(const CapSamples& s) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& t : s.tau) lo = std::min(lo, t.min_eigenvalue());
  return lo;
}

CapillaryFunction random_convex_test_function(double theta, std::uint64_t seed, double eps,
                                              double min_lambda) {
  const CapQuadrature check{theta, 1, 32};
  for (int attempt = 0; attempt < 40; ++attempt) {
    CapillaryFunction f(theta, NeumannFactor::random_even(theta, seed, eps));
    if (min_eigenvalue(samples_from_function(f, check)) >= min_lambda) return f;
    eps *= 0.5;
  }
  return model_function(theta);
}

}  // namespace caplp
