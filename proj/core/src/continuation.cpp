#include "caplp/continuation.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>

namespace caplp {

double max_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

namespace {

bool admissible(const IterateHealth& h, double delta_cone) {
  return std::isfinite(h.s_min) && std::isfinite(h.lambda1_min) && h.s_min > 0.0 &&
         h.lambda1_min > delta_cone;
}

}  // namespace

StepOutcome newton_step(const NewtonSystem& sys, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& residual, const NewtonOptions& opts) {
  StepOutcome out;
  out.x = x;
  const double r0 = max_norm(residual);
  out.residual_norm = r0;

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  SparseMatrix jac = sys.jacobian(x);
  jac.makeCompressed();
  lu.compute(jac);
  if (lu.info() != Eigen::Success) return out;
  const Eigen::VectorXd dx = lu.solve(-residual);
  if (lu.info() != Eigen::Success || !dx.allFinite()) return out;
  out.update_norm = max_norm(dx);

  double lambda = 1.0;
  for (int bt = 0; bt <= opts.max_backtracks; ++bt, lambda *= 0.5) {
    Eigen::VectorXd trial = x + lambda * dx;
    if (!admissible(sys.health(trial), opts.delta_cone)) continue;
    const Eigen::VectorXd r = sys.residual(trial);
    const double rn = max_norm(r);
    if (!std::isfinite(rn)) continue;
    if (rn <= opts.tol || rn < (1.0 - 1e-4 * lambda) * r0) {
      out.accepted = true;
      out.x = std::move(trial);
      out.residual_norm = rn;
      out.damping = lambda;
      return out;
    }
  }
  return out;
}

NewtonOutcome solve_newton(const NewtonSystem& sys, Eigen::VectorXd x, const NewtonOptions& opts) {
  NewtonOutcome out;
  if (!admissible(sys.health(x), opts.delta_cone)) {
    out.x = std::move(x);
    out.failure = "initial iterate outside the positive convex set";
    return out;
  }
  Eigen::VectorXd r = sys.residual(x);
  double rn = max_norm(r);
  out.residual_history.push_back(rn);
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (rn <= opts.tol) {
      out.converged = true;
      break;
    }
    StepOutcome step = newton_step(sys, x, r, opts);
    if (!step.accepted) {
      out.failure = "line search failed";
      break;
    }
    ++out.iterations;
    x = std::move(step.x);
    r = sys.residual(x);
    rn = max_norm(r);
    out.residual_history.push_back(rn);
  }
  if (!out.converged && rn <= opts.tol) out.converged = true;
  if (!out.converged && out.failure.empty()) out.failure = "iteration limit reached";
  out.x = std::move(x);
  return out;
}

ContinuationResult continue_path(NewtonSystem& sys, Eigen::VectorXd x0, const Schedule& schedule,
                                 const NewtonOptions& opts) {
  ContinuationResult out;
  auto record = [&](double t, double dt, const NewtonOutcome& nw) {
    const IterateHealth h = sys.health(nw.x);
    StepRecord rec;
    rec.t = t;
    rec.q = sys.exponent();
    rec.dt = dt;
    rec.newton_iterations = nw.iterations;
    rec.residual = nw.residual_history.back();
    rec.lambda1_min = h.lambda1_min;
    rec.s_min = h.s_min;
    rec.s_max = h.s_max;
    out.steps.push_back(rec);
    out.newton_histories.push_back(nw.residual_history);
  };

  sys.set_parameter(0.0);
  NewtonOutcome start = solve_newton(sys, std::move(x0), opts);
  if (!start.converged) {
    out.x = std::move(start.x);
    out.stalled_at = 0.0;
    out.message = "no convergence at t = 0: " + start.failure;
    return out;
  }
  record(0.0, 0.0, start);

  double t = 0.0;
  double dt = std::clamp(schedule.dt0, schedule.dt_min, schedule.dt_max);
  double dt_prev = 0.0;
  Eigen::VectorXd x = std::move(start.x);
  Eigen::VectorXd x_prev;
  while (t < 1.0) {
    const double tn = std::min(1.0, t + dt);
    const double step = tn - t;
    Eigen::VectorXd guess = x;
    if (x_prev.size() == x.size() && dt_prev > 0.0) {
      Eigen::VectorXd secant = x + (step / dt_prev) * (x - x_prev);
      if (admissible(sys.health(secant), opts.delta_cone)) guess = std::move(secant);
    }
    sys.set_parameter(tn);
    NewtonOutcome nw = solve_newton(sys, std::move(guess), opts);
    if (nw.converged) {
      record(tn, step, nw);
      x_prev = std::move(x);
      x = std::move(nw.x);
      dt_prev = step;
      t = tn;
      if (nw.iterations <= schedule.fast_iterations) dt = std::min(dt * schedule.grow, schedule.dt_max);
      continue;
    }
    out.rejected_t.push_back(tn);
    dt *= 0.5;
    if (dt < schedule.dt_min) {
      out.x = std::move(x);
      out.stalled_at = t;
      out.message = "continuation stalled at t = " + std::to_string(t) + ": " + nw.failure;
      sys.set_parameter(t);
      return out;
    }
  }
  out.status = SolveStatus::converged;
  out.x = std::move(x);
  return out;
}

}  // namespace caplp
