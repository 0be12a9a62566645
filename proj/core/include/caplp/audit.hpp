#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/field.hpp"
#include "caplp/samples.hpp"
#include "caplp/solver.hpp"

namespace caplp {

using Point3 = std::array<double, 3>;

/// Point on the reconstructed hypersurface X = s u + grad s for the normal
/// u = (sin b cos p, sin b sin p, cos b).
Point3 embed(const LocalJet& d, double beta, double phi);

/// Thrown by reconstruct when tau#[s] is not positive definite.
class ConvexityError : public std::runtime_error {
 public:
  explicit ConvexityError(double lambda1_min);
  double lambda1_min() const { return lambda1_min_; }

 private:
  double lambda1_min_;
};

struct BodyGeometry {
  GridPtr grid;
  std::vector<Point3> points;  // per grid node
  Point3 pole{};               // extrapolated to beta = 0
  double height = 0.0;         // max x_3
  double planarity = 0.0;      // max |x_3| over the rim ring
  double r_in = 0.0;           // min |x'| over the rim ring
  double r_out = 0.0;          // max |x'| over the rim ring
  std::vector<double> slopes;  // |Df| from beta-chords, pole outwards
  double max_slope = 0.0;
};

/// Throws ConvexityError if lambda_1 of tau#[s] is not positive at every node.
BodyGeometry reconstruct(const CapField& s);

/// Volume enclosed by the reconstructed surface and the plane x_3 = 0, from the
/// flux of (0, 0, x_3) through a triangulation of the grid points.
double mesh_volume(const BodyGeometry& body);

/// Embedding point cloud: u_beta, u_phi, X1, X2, X3 per node.
void write_embedding_csv(std::ostream& os, const BodyGeometry& body);

/// s + t ell on the same grid.
CapField parallel_body(const CapField& s, double t);

/// V(s_0, ..., s_k, ell, ..., ell) = 1/(n+1) int s_0 Q_k(tau#[s_1], ..., tau#[s_k]).
/// All sample sets must share one layout; k = args.size() - 1.
double mixed_volume(std::span<const CapSamples* const> args, int n = 2);

/// 1/(n+1) int s_0 sigma_k(tau#[s]) / C(n, k).
double mixed_volume_direct(const CapSamples& s0, const CapSamples& s, int k, int n = 2);

struct AfCheck {
  double lhs = 0.0;  // V(s1, s2, s1, ..., s1)^2
  double rhs = 0.0;  // V(s1, s1, ...) V(s2, s2, s1, ...)
  double margin = 0.0;
};

AfCheck af_inequality_check(const CapSamples& s1, const CapSamples& s2, int k, int n = 2);

struct AreaMeasure {
  std::vector<double> density;  // C(n,k)^{-1} ell sigma_k(tau#[s]) per sample
  double total = 0.0;
};

AreaMeasure area_measure(const CapSamples& s, int k, int n = 2);
AreaMeasure area_measure(const CapField& s, const CapParams& params);

/// max over samples of |sigma_k(tau#[s + t ell]) - sum_j C(n-j, k-j) t^{k-j} sigma_j(tau#[s])|,
/// relative to max(1, |sigma_k(tau#[s + t ell])|).
double steiner_binomial_gap(const CapSamples& s, const CapSamples& st, double t, int k, int n = 2);

struct SteinerCheck {
  double rho = 0.0;
  double lhs = 0.0;  // vol(body + rho C_theta) - vol(body)
  double rhs = 0.0;  // sum_j rho^{n+1-j}/(n+1-j) int ell sigma_j(tau#[s])
  double gap = 0.0;
  bool pass = false;
};

/// Grid version: left side from mesh volumes, right side by midpoint quadrature.
SteinerCheck steiner_volume_check(const CapField& s, double rho, double tol);

/// Analytic version on Gauss samples: volumes from the flux of (0, 0, x_3) in the
/// Gauss-map parametrization.
SteinerCheck steiner_volume_check(const CapillaryFunction& s, double rho, const CapQuadrature& quad,
                                  double tol = 1e-10);

/// Volume of the body with support function sampled by s, n = 2.
double support_volume(const CapSamples& s);

struct AuditRecord {
  std::string name;
  std::string ref;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  bool mandatory = true;
};

struct AuditReport {
  std::vector<AuditRecord> records;
  bool pass() const;
  const AuditRecord* find(const std::string& name) const;
};

struct AuditOptions {
  double slope_slack = 0.02;
  double geom_factor = 10.0;  // geometric tolerance geom_factor * h^2 * max s
};

/// A priori estimate audit of a solution s for data phi. If a solve report is
/// given, lambda_1 is also checked along the accepted path.
AuditReport estimates_audit(const CapField& s, const CapField& phi, const CapParams& params,
                            const SolveReport* path = nullptr, const AuditOptions& opts = {});

/// (phi_0 / C(n,k))^{1/(k+1-p)} (1 - cos theta)^{k/(k+1-p)}.
double max_s_lower_bound(double phi0, const CapParams& params);

/// int s^p phi over the cap.
double holder_pairing(const CapField& s, const CapField& phi, double p);

}  // namespace caplp
