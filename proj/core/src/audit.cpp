#include "caplp/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "caplp/field_io.hpp"
#include "caplp/symfunc.hpp"

namespace caplp {

Point3 embed(const LocalJet& d, double beta, double phi) {
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const double gp = d.p / sb;
  return {d.s * sb * cp + d.b * cb * cp - gp * sp, d.s * sb * sp + d.b * cb * sp + gp * cp,
          d.s * cb - d.b * sb};
}

ConvexityError::ConvexityError(double lambda1_min)
    : std::runtime_error("surface is not strictly convex: lambda_1 min = " + std::to_string(lambda1_min)),
      lambda1_min_(lambda1_min) {}

namespace {

double radius(const Point3& x) { return std::hypot(x[0], x[1]); }

double chord_slope(const Point3& a, const Point3& b) {
  const double dr = std::hypot(b[0] - a[0], b[1] - a[1]);
  return dr > 0.0 ? std::abs(b[2] - a[2]) / dr : std::numeric_limits<double>::infinity();
}

double flux_z(const Point3& a, const Point3& b, const Point3& c) {
  const double area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
  return (a[2] + b[2] + c[2]) / 3.0 * area;
}

}  // namespace

BodyGeometry reconstruct(const CapField& s) {
  const TauField tau = tau_sharp(s);
  if (!(tau.lambda1_min > 0.0)) throw ConvexityError(tau.lambda1_min);
  const CapGrid& g = s.grid();
  BodyGeometry out;
  out.grid = s.grid_ptr();
  out.points.resize(g.size());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      out.points[g.node(i, j)] = embed(derivatives(s, i, j), g.beta(i), g.phi(j));
    }
  }
  // Ring averages are even in beta; extrapolate a + b beta^2 to the pole.
  Point3 a0{};
  Point3 a1{};
  for (int j = 0; j < g.n_phi(); ++j) {
    for (int c = 0; c < 3; ++c) {
      a0[c] += out.points[g.node(0, j)][c] / g.n_phi();
      a1[c] += out.points[g.node(1, j)][c] / g.n_phi();
    }
  }
  const double b0 = g.beta(0) * g.beta(0);
  const double b1 = g.beta(1) * g.beta(1);
  for (int c = 0; c < 3; ++c) out.pole[c] = (b1 * a0[c] - b0 * a1[c]) / (b1 - b0);

  out.height = out.pole[2];
  for (const auto& x : out.points) out.height = std::max(out.height, x[2]);
  out.r_in = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.n_phi(); ++j) {
    const Point3& x = out.points[g.node(g.rim_row(), j)];
    out.planarity = std::max(out.planarity, std::abs(x[2]));
    out.r_in = std::min(out.r_in, radius(x));
    out.r_out = std::max(out.r_out, radius(x));
  }
  for (int j = 0; j < g.n_phi(); ++j) {
    out.slopes.push_back(chord_slope(out.pole, out.points[g.node(0, j)]));
    for (int i = 0; i < g.rim_row(); ++i) {
      out.slopes.push_back(chord_slope(out.points[g.node(i, j)], out.points[g.node(i + 1, j)]));
    }
  }
  out.max_slope = *std::max_element(out.slopes.begin(), out.slopes.end());
  return out;
}

double mesh_volume(const BodyGeometry& body) {
  const CapGrid& g = *body.grid;
  double vol = 0.0;
  for (int j = 0; j < g.n_phi(); ++j) {
    vol += flux_z(body.pole, body.points[g.node(0, j)], body.points[g.node(0, j + 1)]);
    for (int i = 0; i < g.rim_row(); ++i) {
      const Point3& a = body.points[g.node(i, j)];
      const Point3& b = body.points[g.node(i + 1, j)];
      const Point3& c = body.points[g.node(i + 1, j + 1)];
      const Point3& d = body.points[g.node(i, j + 1)];
      vol += flux_z(a, b, c) + flux_z(a, c, d);
    }
  }
  return vol;
}

void write_embedding_csv(std::ostream& os, const BodyGeometry& body) {
  const CapGrid& g = *body.grid;
  os << "u_beta,u_phi,X1,X2,X3\n";
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      const Point3& x = body.points[g.node(i, j)];
      os << format_double(g.beta(i)) << ',' << format_double(g.phi(j)) << ',' << format_double(x[0]) << ','
         << format_double(x[1]) << ',' << format_double(x[2]) << '\n';
    }
  }
}

CapField parallel_body(const CapField& s, double t) {
  const double theta = s.grid().theta();
  CapField out = s + t * CapField::sample(s.grid_ptr(), [&](double b, double) { return ell(theta, b); }, true);
  out.set_even(s.even());
  return out;
}

double mixed_volume(std::span<const CapSamples* const> args, int n) {
  if (args.size() < 2) throw std::invalid_argument("mixed_volume needs at least two arguments");
  const int k = static_cast<int>(args.size()) - 1;
  if (k > n) throw std::invalid_argument("mixed_volume: more than n + 1 arguments");
  for (const CapSamples* a : args) {
    if (!a->same_layout(*args[0])) throw std::invalid_argument("mixed_volume: sample layouts differ");
  }
  const CapSamples& s0 = *args[0];
  std::vector<SymEndo> slot(k);
  double acc = 0.0;
  for (std::size_t m = 0; m < s0.size(); ++m) {
    for (int i = 0; i < k; ++i) slot[i] = args[i + 1]->tau[m];
    acc += s0.weight[m] * s0.jet[m].s * polarize_Qk(slot, n);
  }
  return acc / (n + 1);
}

double mixed_volume_direct(const CapSamples& s0, const CapSamples& s, int k, int n) {
  if (!s0.same_layout(s)) throw std::invalid_argument("mixed_volume_direct: sample layouts differ");
  double acc = 0.0;
  for (std::size_t m = 0; m < s0.size(); ++m) acc += s0.weight[m] * s0.jet[m].s * sigma_k(s.tau[m], k);
  return acc / (binom(n, k) * (n + 1));
}

AfCheck af_inequality_check(const CapSamples& s1, const CapSamples& s2, int k, int n) {
  auto volume = [&](const CapSamples* a, const CapSamples* b) {
    std::vector<const CapSamples*> args{a, b};
    for (int i = 1; i < k; ++i) args.push_back(&s1);
    return mixed_volume(args, n);
  };
  AfCheck out;
  const double v12 = volume(&s1, &s2);
  out.lhs = v12 * v12;
  out.rhs = volume(&s1, &s1) * volume(&s2, &s2);
  out.margin = out.lhs - out.rhs;
  return out;
}

AreaMeasure area_measure(const CapSamples& s, int k, int n) {
  AreaMeasure out;
  out.density.resize(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    out.density[m] = ell(s.theta, s.beta[m]) * sigma_k(s.tau[m], k) / binom(n, k);
  }
  out.total = s.integrate(out.density);
  return out;
}

AreaMeasure area_measure(const CapField& s, const CapParams& params) {
  return area_measure(samples_from_field(s), params.k, params.n);
}

double steiner_binomial_gap(const CapSamples& s, const CapSamples& st, double t, int k, int n) {
  if (!s.same_layout(st)) throw std::invalid_argument("steiner_binomial_gap: sample layouts differ");
  double worst = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    double expansion = 0.0;
    for (int j = 0; j <= k; ++j) expansion += binom(n - j, k - j) * std::pow(t, k - j) * sigma_k(s.tau[m], j);
    const double direct = sigma_k(st.tau[m], k);
    worst = std::max(worst, std::abs(direct - expansion) / std::max(1.0, std::abs(direct)));
  }
  return worst;
}

namespace {

double steiner_rhs(const CapSamples& s, double rho) {
  const int n = 2;
  double rhs = 0.0;
  for (int j = 0; j <= n; ++j) {
    std::vector<double> f(s.size());
    for (std::size_t m = 0; m < s.size(); ++m) f[m] = ell(s.theta, s.beta[m]) * sigma_k(s.tau[m], j);
    rhs += std::pow(rho, n + 1 - j) / (n + 1 - j) * s.integrate(f);
  }
  return rhs;
}

SteinerCheck finish(double rho, double lhs, double rhs, double tol) {
  SteinerCheck out;
  out.rho = rho;
  out.lhs = lhs;
  out.rhs = rhs;
  out.gap = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
  out.pass = out.gap <= tol;
  return out;
}

}  // namespace

double support_volume(const CapSamples& s) {
  double acc = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    const double cb = std::cos(s.beta[m]);
    const double x3 = s.jet[m].s * cb - s.jet[m].b * std::sin(s.beta[m]);
    acc += s.weight[m] * x3 * cb * s.tau[m].det();
  }
  return acc;
}

SteinerCheck steiner_volume_check(const CapField& s, double rho, double tol) {
  if (rho < 0.0) throw std::invalid_argument("steiner_volume_check: rho must be non-negative");
  const double lhs = mesh_volume(reconstruct(parallel_body(s, rho))) - mesh_volume(reconstruct(s));
  return finish(rho, lhs, steiner_rhs(samples_from_field(s), rho), tol);
}

SteinerCheck steiner_volume_check(const CapillaryFunction& s, double rho, const CapQuadrature& quad,
                                  double tol) {
  if (rho < 0.0) throw std::invalid_argument("steiner_volume_check: rho must be non-negative");
  const CapSamples base = samples_from_function(s, quad);
  const double lhs = support_volume(samples_from_function(s.parallel(rho), quad)) - support_volume(base);
  return finish(rho, lhs, steiner_rhs(base, rho), tol);
}

bool AuditReport::pass() const {
  return std::all_of(records.begin(), records.end(), [](const AuditRecord& r) { return r.pass || !r.mandatory; });
}

const AuditRecord* AuditReport::find(const std::string& name) const {
  for (const auto& r : records) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

double max_s_lower_bound(double phi0, const CapParams& params) {
  const double e = params.k + 1.0 - params.p;
  return std::pow(phi0 / binom(params.n, params.k), 1.0 / e) *
         std::pow(1.0 - std::cos(params.theta), params.k / e);
}

AuditReport estimates_audit(const CapField& s, const CapField& phi, const CapParams& params,
                            const SolveReport* path, const AuditOptions& opts) {
  const CapGrid& g = s.grid();
  if (!g.same_layout(phi.grid())) throw std::invalid_argument("estimates_audit: grid mismatch");
  AuditReport rep;
  auto add = [&](std::string name, std::string ref, double lhs, double rhs, double margin, bool pass,
                 bool mandatory = true) {
    rep.records.push_back({std::move(name), std::move(ref), lhs, rhs, margin, pass, mandatory});
  };

  const double s_max = s.max();
  const double s_min = s.min();
  const double geom_tol = opts.geom_factor * g.h_beta() * g.h_beta() * std::max(1.0, s_max);
  const double bound = max_s_lower_bound(phi.min(), params);
  add("max_s_lower_bound", "max s >= (phi_0/C(n,k))^{1/(k+1-p)} (1-cos theta)^{k/(k+1-p)}", s_max, bound,
      s_max - bound, s_max - bound > 0.0);

  const TauField tau = tau_sharp(s);
  add("lambda1_positive", "lambda_1(tau#[s]) > 0 at every node", tau.lambda1_min, 0.0, tau.lambda1_min,
      tau.lambda1_min > 0.0);
  if (path) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& st : path->steps) lo = std::min(lo, st.lambda1_min);
    add("lambda1_path", "lambda_1 > 0 at every accepted continuation step", lo, 0.0, lo, lo > 0.0);
  }

  double sigma1_max = 0.0;
  for (const auto& t : tau.tau) sigma1_max = std::max(sigma1_max, t.trace());
  add("sigma1_bound", "max sigma_1(tau#[s]) (reported)", sigma1_max, std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity(), true, false);

  if (!(tau.lambda1_min > 0.0)) {
    add("reconstruction", "tau#[s] positive definite", tau.lambda1_min, 0.0, tau.lambda1_min, false);
    return rep;
  }
  const BodyGeometry body = reconstruct(s);
  const double tan_theta = std::tan(params.theta);
  const double slope_rhs = tan_theta + opts.slope_slack;
  add("slope", "|Df| <= tan theta", body.max_slope, slope_rhs, slope_rhs - body.max_slope,
      body.max_slope <= slope_rhs);
  add("height_positive", "H > 0", body.height, 0.0, body.height, body.height > 0.0);
  const double floor = std::cos(params.theta) * body.height;
  add("s_lower_by_height", "min s >= H cos theta", s_min, floor, s_min - floor, s_min - floor >= -geom_tol);
  const double ball = body.height / tan_theta;
  add("inradius_ball", "ball of radius H / tan theta inside the base domain", body.r_in, ball, body.r_in - ball,
      body.r_in - ball >= -geom_tol);
  add("boundary_planarity", "max |x_{n+1}| on the boundary", body.planarity, geom_tol, geom_tol - body.planarity,
      body.planarity <= geom_tol);
  return rep;
}

double holder_pairing(const CapField& s, const CapField& phi, double p) {
  if (!s.grid().same_layout(phi.grid())) throw std::invalid_argument("holder_pairing: grid mismatch");
  std::vector<double> f(s.values().size());
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = std::pow(s[n], p) * phi[n];
  return integrate(s.grid_ptr(), f);
}

}  // namespace caplp
