#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

namespace caplp {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Positivity and convexity state of an iterate.
struct IterateHealth {
  double s_min = 0.0;
  double s_max = 0.0;
  double lambda1_min = 0.0;
};

/// A discrete nonlinear system R(t; x) = 0 along the continuation parameter t.
class NewtonSystem {
 public:
  virtual ~NewtonSystem() = default;

  virtual Eigen::Index size() const = 0;
  virtual void set_parameter(double t) = 0;
  virtual double parameter() const = 0;
  virtual double exponent() const = 0;
  virtual Eigen::VectorXd residual(const Eigen::VectorXd& x) const = 0;
  virtual SparseMatrix jacobian(const Eigen::VectorXd& x) const = 0;
  virtual IterateHealth health(const Eigen::VectorXd& x) const = 0;
};

struct NewtonOptions {
  double tol = 1e-9;
  double delta_cone = 1e-10;
  int max_iterations = 25;
  int max_backtracks = 14;
};

struct NewtonOutcome {
  bool converged = false;
  Eigen::VectorXd x;
  std::vector<double> residual_history;
  int iterations = 0;
  std::string failure;
};

/// Result of one damped Newton update.
struct StepOutcome {
  bool accepted = false;
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  double damping = 0.0;
  double update_norm = 0.0;
};

/// One Newton update with backtracking: the step is halved until the iterate keeps
/// min s > 0 and lambda_1 > delta_cone and the residual max-norm decreases.
StepOutcome newton_step(const NewtonSystem& sys, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& residual, const NewtonOptions& opts);

NewtonOutcome solve_newton(const NewtonSystem& sys, Eigen::VectorXd x, const NewtonOptions& opts);

struct Schedule {
  double dt0 = 0.125;
  double dt_min = 1e-4;
  double dt_max = 0.25;
  double grow = 1.5;
  int fast_iterations = 4;  // grow dt when Newton converges within this many steps
};

struct StepRecord {
  double t = 0.0;
  double q = 1.0;
  double dt = 0.0;
  int newton_iterations = 0;
  double residual = 0.0;
  double lambda1_min = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
};

enum class SolveStatus { converged, stalled };

struct ContinuationResult {
  SolveStatus status = SolveStatus::stalled;
  Eigen::VectorXd x;
  std::vector<StepRecord> steps;  // accepted steps, t = 0 first
  std::vector<double> rejected_t;
  std::vector<std::vector<double>> newton_histories;  // one per accepted step
  double stalled_at = 0.0;
  std::string message;
};

/// Follows t from 0 to 1 with secant prediction and dt halving on Newton failure.
ContinuationResult continue_path(NewtonSystem& sys, Eigen::VectorXd x0, const Schedule& schedule,
                                 const NewtonOptions& opts);

double max_norm(const Eigen::VectorXd& v);

}  // namespace caplp
