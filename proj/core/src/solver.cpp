#include "caplp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace caplp {

namespace {

double pow_guarded(double s, double e) {
  if (e == 0.0) return 1.0;
  return std::pow(s, e);
}

double rim_derivative(const CapField& s, int j) {
  const CapGrid& g = s.grid();
  double db = 0.0;
  for (const Tap& t : g.row_stencil(g.rim_row()).d1) db += t.w * s(t.row, j);
  return db;
}

double interior_residual_at(const CapField& s, int i, int j, double q, double rhs, int k) {
  const SymEndo a = tau_from_jet(derivatives(s, i, j), s.grid().beta(i));
  return sigma_k(a, k) - pow_guarded(s(i, j), q - 1.0) * rhs;
}

void check_rhs(const CapGrid& g, std::span<const double> rhs) {
  if (rhs.size() != g.size()) {
    throw std::invalid_argument("rhs size " + std::to_string(rhs.size()) + " does not match grid size " +
                                std::to_string(g.size()));
  }
}

// Appends the linearization row of node (i, j); col maps a node to its column.
template <class ColFn>
void append_row(std::vector<Eigen::Triplet<double>>& trip, Eigen::Index row, const CapField& s, int i,
                int j, double q, double rhs, int k, double cone_margin, ColFn&& col) {
  const CapGrid& g = s.grid();
  if (i == g.rim_row()) {
    const double cot = 1.0 / std::tan(g.theta());
    for (const Tap& t : g.row_stencil(i).d1) trip.emplace_back(row, col(g.node(t.row, j)), t.w);
    trip.emplace_back(row, col(g.node(i, j)), -cot);
    return;
  }
  const double beta = g.beta(i);
  const auto stencil = g.local_stencil(i, j);
  const double c = s(i, j);
  LocalJet d;
  for (const auto& e : stencil) d += (s[e.node] - c) * e.coef;
  d.s = c;
  const SymEndo a = tau_from_jet(d, beta);
  for (int m = 1; m <= k; ++m) {
    const double sm = sigma_k(a, m);
    if (!(sm > cone_margin)) throw ConeExitError(m, sm);
  }
  const SymEndo grad = sigma_k_grad(a, k);
  for (const auto& e : stencil) trip.emplace_back(row, col(e.node), grad.contract(tau_from_jet(e.coef, beta)));
  if (q != 1.0) {
    trip.emplace_back(row, col(g.node(i, j)), -(q - 1.0) * pow_guarded(s(i, j), q - 2.0) * rhs);
  }
}

}  // namespace

ResidualPair residual_pair(const CapField& s, double q, std::span<const double> rhs, int k) {
  const CapGrid& g = s.grid();
  check_rhs(g, rhs);
  ResidualPair out;
  out.interior.resize(static_cast<std::size_t>(g.n_beta()) * g.n_phi());
  out.boundary.resize(g.n_phi());
  const double cot = 1.0 / std::tan(g.theta());
  for (int i = 0; i < g.n_beta(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      const auto nd = g.node(i, j);
      out.interior[nd] = interior_residual_at(s, i, j, q, rhs[nd], k);
      out.interior_norm = std::max(out.interior_norm, std::abs(out.interior[nd]));
    }
  }
  for (int j = 0; j < g.n_phi(); ++j) {
    out.boundary[j] = rim_derivative(s, j) - cot * s(g.rim_row(), j);
    out.boundary_norm = std::max(out.boundary_norm, std::abs(out.boundary[j]));
  }
  return out;
}

std::vector<double> stacked_residual(const CapField& s, double q, std::span<const double> rhs, int k) {
  ResidualPair rp = residual_pair(s, q, rhs, k);
  std::vector<double> out = std::move(rp.interior);
  out.insert(out.end(), rp.boundary.begin(), rp.boundary.end());
  return out;
}

SparseMatrix linearize(const CapField& s, double q, std::span<const double> rhs, int k,
                       double cone_margin) {
  const CapGrid& g = s.grid();
  check_rhs(g, rhs);
  const auto n = static_cast<Eigen::Index>(g.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.size() * 20);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      const auto nd = g.node(i, j);
      append_row(trip, static_cast<Eigen::Index>(nd), s, i, j, q, rhs[nd], k, cone_margin,
                 [](std::size_t c) { return static_cast<Eigen::Index>(c); });
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

JacobianCheck jacobian_fd_check(const CapField& s, const CapField& v, double q, std::span<const double> rhs,
                                int k, double eps) {
  if (!s.grid().same_layout(v.grid())) throw std::invalid_argument("jacobian_fd_check: grid mismatch");
  const CapField shifted = s + eps * v;
  Eigen::VectorXd step(static_cast<Eigen::Index>(s.values().size()));
  for (Eigen::Index n = 0; n < step.size(); ++n) step[n] = (shifted[n] - s[n]) / eps;
  const Eigen::VectorXd jv = linearize(s, q, rhs, k) * step;
  const auto r0 = stacked_residual(s, q, rhs, k);
  const auto r1 = stacked_residual(shifted, q, rhs, k);
  JacobianCheck out;
  for (Eigen::Index n = 0; n < step.size(); ++n) {
    out.abs_error = std::max(out.abs_error, std::abs((r1[n] - r0[n]) / eps - jv[n]));
    out.scale = std::max(out.scale, std::abs(jv[n]));
  }
  out.rel_error = out.scale > 0.0 ? out.abs_error / out.scale : out.abs_error;
  return out;
}

CapProblem::CapProblem(CapParams params, CapField phi) : params_(params), phi_(std::move(phi)) {
  params_.validate();
  if (params_.n != 2) {
    throw std::invalid_argument("the 2-D cap solver needs n = 2, got n = " + std::to_string(params_.n));
  }
  if (!(phi_.min() > 0.0)) throw std::invalid_argument("phi must be positive on every node");
  set_parameter(0.0);
}

std::size_t CapProblem::reduced(std::size_t node) const {
  const CapGrid& g = grid();
  const int half = g.n_phi() / 2;
  return static_cast<std::size_t>(g.row_of(node)) * half + g.col_of(node) % half;
}

Eigen::Index CapProblem::size() const {
  return static_cast<Eigen::Index>(grid().rows()) * (grid().n_phi() / 2);
}

Eigen::VectorXd CapProblem::restrict_even(const CapField& s) const {
  const CapGrid& g = grid();
  if (!g.same_layout(s.grid())) throw std::invalid_argument("restrict_even: grid mismatch");
  const int half = g.n_phi() / 2;
  Eigen::VectorXd x(size());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < half; ++j) x[static_cast<Eigen::Index>(i) * half + j] = 0.5 * (s(i, j) + s(i, j + half));
  }
  return x;
}

CapField CapProblem::expand(const Eigen::VectorXd& x) const {
  const CapGrid& g = grid();
  std::vector<double> v(g.size());
  for (std::size_t nd = 0; nd < v.size(); ++nd) v[nd] = x[static_cast<Eigen::Index>(reduced(nd))];
  return CapField(phi_.grid_ptr(), std::move(v), true);
}

void CapProblem::set_parameter(double t) {
  HomotopyRhs h = homotopy_rhs(t, phi_.values(), params_);
  t_ = t;
  q_ = h.q;
  rhs_ = std::move(h.rhs);
}

Eigen::VectorXd CapProblem::residual(const Eigen::VectorXd& x) const {
  const CapField s = expand(x);
  const CapGrid& g = grid();
  const int half = g.n_phi() / 2;
  const double cot = 1.0 / std::tan(g.theta());
  Eigen::VectorXd r(size());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < half; ++j) {
      const Eigen::Index row = static_cast<Eigen::Index>(i) * half + j;
      if (i == g.rim_row()) {
        r[row] = rim_derivative(s, j) - cot * s(i, j);
      } else {
        r[row] = interior_residual_at(s, i, j, q_, rhs_[g.node(i, j)], params_.k);
      }
    }
  }
  return r;
}

SparseMatrix CapProblem::jacobian(const Eigen::VectorXd& x) const {
  const CapField s = expand(x);
  const CapGrid& g = grid();
  const int half = g.n_phi() / 2;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(size()) * 20);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < half; ++j) {
      append_row(trip, static_cast<Eigen::Index>(i) * half + j, s, i, j, q_, rhs_[g.node(i, j)], params_.k,
                 cone_margin_, [this](std::size_t c) { return static_cast<Eigen::Index>(reduced(c)); });
    }
  }
  SparseMatrix m(size(), size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

IterateHealth CapProblem::health(const Eigen::VectorXd& x) const {
  IterateHealth h;
  if (x.size() != size() || !x.allFinite()) {
    h.s_min = h.s_max = h.lambda1_min = std::numeric_limits<double>::quiet_NaN();
    return h;
  }
  h.s_min = x.minCoeff();
  h.s_max = x.maxCoeff();
  const CapField s = expand(x);
  const CapGrid& g = grid();
  h.lambda1_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.n_phi() / 2; ++j) {
      h.lambda1_min = std::min(h.lambda1_min, tau_from_jet(derivatives(s, i, j), g.beta(i)).min_eigenvalue());
    }
  }
  return h;
}

HomotopyState CapProblem::state(const Eigen::VectorXd& x) const { return {t_, q_, rhs_, expand(x)}; }

CapStepOutcome newton_step(CapProblem& problem, const HomotopyState& state, const NewtonOptions& opts) {
  if (problem.parameter() != state.t) problem.set_parameter(state.t);
  const Eigen::VectorXd x = problem.restrict_even(state.s);
  const StepOutcome step = newton_step(problem, x, problem.residual(x), opts);
  return {step.accepted, problem.state(step.accepted ? step.x : x), step.residual_norm, step.damping};
}

CapField initial_iterate(const GridPtr& grid, const CapParams& params) {
  const double c = std::pow(binom(params.n, params.k), -1.0 / params.k);
  const double theta = grid->theta();
  return CapField::sample(grid, [&](double b, double) { return c * ell(theta, b); }, true);
}

SolveResult solve_path(const CapField& phi, const CapParams& params, const SolverOptions& opts,
                       std::optional<CapField> start) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  if (std::abs(phi.grid().theta() - params.theta) > 1e-14) {
    throw std::invalid_argument("phi grid angle does not match params.theta");
  }
  if (!(phi.min() > 0.0)) throw std::invalid_argument("phi must be positive on every node");
  const double scale = std::max(1.0, std::abs(phi.max()));
  if (evenness_defect(phi) > 1e-12 * scale) throw std::invalid_argument("phi must be even");

  CapProblem problem(params, phi);
  const CapField s0 = start ? project_even(*start) : initial_iterate(phi.grid_ptr(), params);
  ContinuationResult cr = continue_path(problem, problem.restrict_even(s0), opts.schedule, opts.newton);

  SolveResult out{problem.expand(cr.x), {}};
  SolveReport& rep = out.report;
  rep.status = cr.status;
  rep.message = std::move(cr.message);
  rep.steps = std::move(cr.steps);
  rep.rejected_t = std::move(cr.rejected_t);
  rep.newton_histories = std::move(cr.newton_histories);
  rep.stalled_at = cr.stalled_at;

  const ResidualPair rp = residual_pair(out.solution, problem.exponent(), problem.rhs(), params.k);
  rep.interior_residual = rp.interior_norm;
  rep.robin_residual = rp.boundary_norm;
  const TauField tau = tau_sharp(out.solution);
  rep.lambda1_min = tau.lambda1_min;
  rep.s_min = out.solution.min();
  rep.s_max = out.solution.max();
  if (rep.status == SolveStatus::converged &&
      std::max(rep.interior_residual, rep.robin_residual) > opts.newton.tol) {
    rep.status = SolveStatus::stalled;
    rep.message = "final residual above tolerance";
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

StructuralReport structural_hypothesis_check(const CapField& phi, const CapParams& params, double tol) {
  params.validate();
  if (!(phi.min() > 0.0)) throw std::invalid_argument("phi must be positive on every node");
  const double e = -1.0 / (params.p + params.k - 1.0);
  std::vector<double> v(phi.values().begin(), phi.values().end());
  for (double& x : v) x = std::pow(x, e);
  const CapField psi(phi.grid_ptr(), std::move(v), phi.even());
  StructuralReport out;
  out.interior_margin = tau_sharp(psi).lambda1_min_interior;
  const CapGrid& g = psi.grid();
  const double cot = 1.0 / std::tan(g.theta());
  out.boundary_margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.n_phi(); ++j) {
    out.boundary_margin = std::min(out.boundary_margin, cot * psi(g.rim_row(), j) - rim_derivative(psi, j));
  }
  out.interior_pass = out.interior_margin >= -tol;
  out.boundary_pass = out.boundary_margin >= -tol;
  return out;
}

}  // namespace caplp
