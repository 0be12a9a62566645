#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/continuation.hpp"
#include "caplp/field.hpp"
#include "caplp/homotopy.hpp"

namespace caplp {

/// Interior residual F(q, s) = sigma_k(tau#[s]) - s^{q-1} rhs on cell rows and
/// boundary residual G(q, s) = d_beta s - cot(theta) s on the rim ring.
struct ResidualPair {
  std::vector<double> interior;  // n_beta * n_phi, row-major
  std::vector<double> boundary;  // n_phi
  double interior_norm = 0.0;
  double boundary_norm = 0.0;
};

ResidualPair residual_pair(const CapField& s, double q, std::span<const double> rhs, int k);

/// Discrete linearization of (F, G) at s in the full node space (rows and columns
/// indexed by grid node):
///   interior  D v = sigma_k^{ij}(tau#[s]) tau#[v]_ij - (q-1) s^{q-2} rhs v,
///   rim       M v = d_beta v - cot(theta) v.
/// Throws ConeExitError if tau#[s] leaves Gamma_k at an interior node.
SparseMatrix linearize(const CapField& s, double q, std::span<const double> rhs, int k,
                       double cone_margin = 1e-10);

/// Applies the stacked residual map (F on cell rows, G on the rim) to a field.
std::vector<double> stacked_residual(const CapField& s, double q, std::span<const double> rhs, int k);

struct JacobianCheck {
  double abs_error = 0.0;  // max |(R(s + eps v) - R(s)) / eps - J v|
  double scale = 0.0;      // max |J v|
  double rel_error = 0.0;
};

/// Forward-difference directional derivative of the stacked residual against the
/// assembled linearization. J is applied to the realized step ((s + eps v) - s) / eps.
JacobianCheck jacobian_fd_check(const CapField& s, const CapField& v, double q, std::span<const double> rhs,
                                int k, double eps = 1e-6);

struct HomotopyState {
  double t = 0.0;
  double q = 1.0;
  std::vector<double> rhs;
  CapField s;
};

/// Discrete capillary L_p problem along the continuation path, posed on the even
/// subspace: unknowns are the columns j < n_phi/2 and s(b, phi + pi) = s(b, phi).
class CapProblem final : public NewtonSystem {
 public:
  CapProblem(CapParams params, CapField phi);

  const CapParams& params() const { return params_; }
  const CapField& phi() const { return phi_; }
  const CapGrid& grid() const { return phi_.grid(); }

  Eigen::VectorXd restrict_even(const CapField& s) const;
  CapField expand(const Eigen::VectorXd& x) const;

  Eigen::Index size() const override;
  void set_parameter(double t) override;
  double parameter() const override { return t_; }
  double exponent() const override { return q_; }
  const std::vector<double>& rhs() const { return rhs_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override;
  SparseMatrix jacobian(const Eigen::VectorXd& x) const override;
  IterateHealth health(const Eigen::VectorXd& x) const override;

  HomotopyState state(const Eigen::VectorXd& x) const;

 private:
  std::size_t reduced(std::size_t node) const;

  CapParams params_;
  CapField phi_;
  double t_ = 0.0;
  double q_ = 1.0;
  std::vector<double> rhs_;
  double cone_margin_ = 1e-10;
};

struct SolverOptions {
  NewtonOptions newton;
  Schedule schedule;
};

struct CapStepOutcome {
  bool accepted = false;
  HomotopyState state;
  double residual_norm = 0.0;
  double damping = 0.0;
};

/// One damped Newton update at the state's t; projects the result onto even fields.
CapStepOutcome newton_step(CapProblem& problem, const HomotopyState& state,
                           const NewtonOptions& opts);

struct SolveReport {
  SolveStatus status = SolveStatus::stalled;
  std::string message;
  std::vector<StepRecord> steps;
  std::vector<double> rejected_t;
  std::vector<std::vector<double>> newton_histories;
  double interior_residual = 0.0;
  double robin_residual = 0.0;
  double lambda1_min = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
  double stalled_at = 0.0;
  double wall_seconds = 0.0;
};

struct SolveResult {
  CapField solution;
  SolveReport report;
};

/// Initial iterate C(n,k)^{-1/k} ell, the even solution of sigma_k = 1.
CapField initial_iterate(const GridPtr& grid, const CapParams& params);

/// Continuation from t = 0 to t = 1 for phi > 0 (even). Throws std::invalid_argument
/// for invalid parameters, n != 2, or non-positive phi.
SolveResult solve_path(const CapField& phi, const CapParams& params, const SolverOptions& opts = {},
                       std::optional<CapField> start = std::nullopt);

struct StructuralReport {
  double interior_margin = 0.0;  // min eigenvalue of tau#[phi^{-1/(p+k-1)}]
  double boundary_margin = 0.0;  // min of cot(theta) psi - d_mu psi on the rim
  bool interior_pass = false;
  bool boundary_pass = false;
  bool pass() const { return interior_pass && boundary_pass; }
};

/// Discrete check of the structural hypotheses on phi (informational).
StructuralReport structural_hypothesis_check(const CapField& phi, const CapParams& params,
                                             double tol = 0.0);

}  // namespace caplp
