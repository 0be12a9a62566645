#include "caplp/rotsym.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "caplp/field_io.hpp"

namespace caplp {

double RotsymExpr::operator()(double beta) const {
  const double x = 1.0 - std::cos(beta);
  double acc = 0.0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

// The 1-D problem reuses the beta stencils of a cap grid; across-pole taps land
// on row 0 since the profile is even in beta.
GridPtr stencil_grid(int n_beta, double theta) { return make_grid(n_beta, 8, theta); }

struct ProfileDerivs {
  double d1 = 0.0;
  double d2 = 0.0;
};

ProfileDerivs profile_derivs(const CapGrid& g, const std::vector<double>& s, int i) {
  // Same centre-differencing as the 2-D stencils.
  const double c = s[i];
  ProfileDerivs d;
  for (const Tap& t : g.row_stencil(i).d1) d.d1 += t.w * (s[t.row] - c);
  for (const Tap& t : g.row_stencil(i).d2) d.d2 += t.w * (s[t.row] - c);
  return d;
}

void eigen_at(const CapGrid& g, const std::vector<double>& s, int i, double& lr, double& lt) {
  const ProfileDerivs d = profile_derivs(g, s, i);
  lr = d.d2 + s[i];
  lt = d.d1 / std::tan(g.beta(i)) + s[i];
}

double sigma_rot(double lr, double lt, int n, int k) {
  return binom(n - 1, k) * std::pow(lt, k) + binom(n - 1, k - 1) * lr * std::pow(lt, k - 1);
}

class RotProblem final : public NewtonSystem {
 public:
  RotProblem(CapParams params, std::vector<double> phi)
      : params_(params), phi_(std::move(phi)), grid_(stencil_grid(static_cast<int>(phi_.size()) - 1, params.theta)) {
    set_parameter(0.0);
  }

  Eigen::Index size() const override { return static_cast<Eigen::Index>(phi_.size()); }
  void set_parameter(double t) override {
    HomotopyRhs h = homotopy_rhs(t, phi_, params_);
    t_ = t;
    q_ = h.q;
    rhs_ = std::move(h.rhs);
  }
  double parameter() const override { return t_; }
  double exponent() const override { return q_; }
  const std::vector<double>& rhs() const { return rhs_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override {
    const std::vector<double> s(x.begin(), x.end());
    const CapGrid& g = *grid_;
    Eigen::VectorXd r(size());
    for (int i = 0; i < g.n_beta(); ++i) {
      double lr = 0.0;
      double lt = 0.0;
      eigen_at(g, s, i, lr, lt);
      r[i] = sigma_rot(lr, lt, params_.n, params_.k) - std::pow(s[i], q_ - 1.0) * rhs_[i];
    }
    const int rim = g.rim_row();
    r[rim] = profile_derivs(g, s, rim).d1 - s[rim] / std::tan(g.theta());
    return r;
  }

  SparseMatrix jacobian(const Eigen::VectorXd& x) const override {
    const std::vector<double> s(x.begin(), x.end());
    const CapGrid& g = *grid_;
    const int n = params_.n;
    const int k = params_.k;
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < g.n_beta(); ++i) {
      double lr = 0.0;
      double lt = 0.0;
      eigen_at(g, s, i, lr, lt);
      const double d_lr = binom(n - 1, k - 1) * std::pow(lt, k - 1);
      double d_lt = k * binom(n - 1, k) * std::pow(lt, k - 1);
      if (k >= 2) d_lt += (k - 1) * binom(n - 1, k - 1) * lr * std::pow(lt, k - 2);
      const double cot = 1.0 / std::tan(g.beta(i));
      for (const Tap& t : g.row_stencil(i).d2) trip.emplace_back(i, t.row, d_lr * t.w);
      for (const Tap& t : g.row_stencil(i).d1) trip.emplace_back(i, t.row, d_lt * cot * t.w);
      double diag = d_lr + d_lt;
      if (q_ != 1.0) diag -= (q_ - 1.0) * std::pow(s[i], q_ - 2.0) * rhs_[i];
      trip.emplace_back(i, i, diag);
    }
    const int rim = g.rim_row();
    for (const Tap& t : g.row_stencil(rim).d1) trip.emplace_back(rim, t.row, t.w);
    trip.emplace_back(rim, rim, -1.0 / std::tan(g.theta()));
    SparseMatrix m(size(), size());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

  IterateHealth health(const Eigen::VectorXd& x) const override {
    IterateHealth h;
    if (x.size() != size() || !x.allFinite()) {
      h.s_min = h.s_max = h.lambda1_min = std::numeric_limits<double>::quiet_NaN();
      return h;
    }
    h.s_min = x.minCoeff();
    h.s_max = x.maxCoeff();
    const RotProfile prof = make_profile(params_.theta, std::vector<double>(x.begin(), x.end()));
    h.lambda1_min = prof.lambda1_min();
    return h;
  }

 private:
  CapParams params_;
  std::vector<double> phi_;
  GridPtr grid_;
  double t_ = 0.0;
  double q_ = 1.0;
  std::vector<double> rhs_;
};

}  // namespace

std::vector<double> profile_betas(int n_beta, double theta) {
  std::vector<double> b(n_beta + 1);
  for (int i = 0; i < n_beta; ++i) b[i] = (i + 0.5) * theta / n_beta;
  b[n_beta] = theta;
  return b;
}

RotProfile make_profile(double theta, std::vector<double> s) {
  const int n_beta = static_cast<int>(s.size()) - 1;
  const GridPtr g = stencil_grid(n_beta, theta);
  RotProfile out;
  out.theta = theta;
  out.beta = profile_betas(n_beta, theta);
  out.s = std::move(s);
  out.lambda_r.resize(out.s.size());
  out.lambda_t.resize(out.s.size());
  for (int i = 0; i <= n_beta; ++i) eigen_at(*g, out.s, i, out.lambda_r[i], out.lambda_t[i]);
  return out;
}

double RotProfile::value_at(double b) const {
  const int nb = n_beta();
  b = std::abs(b);
  // Node list with the mirrored pole nodes in front: beta_{-1-i} = -beta_i.
  auto node_beta = [&](int m) { return m < 0 ? -beta[-1 - m] : beta[m]; };
  auto node_s = [&](int m) { return m < 0 ? s[-1 - m] : s[m]; };
  int lo = static_cast<int>(std::floor(b / theta * nb - 0.5));
  lo = std::clamp(lo - 1, -2, nb - 3);
  double acc = 0.0;
  for (int a = lo; a < lo + 4; ++a) {
    double w = 1.0;
    for (int c = lo; c < lo + 4; ++c) {
      if (c != a) w *= (b - node_beta(c)) / (node_beta(a) - node_beta(c));
    }
    acc += w * node_s(a);
  }
  return acc;
}

double RotProfile::lambda1_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) m = std::min({m, lambda_r[i], lambda_t[i]});
  return m;
}

std::vector<double> rotsym_sigma_k(const RotProfile& profile, const CapParams& params) {
  std::vector<double> out(profile.s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = sigma_rot(profile.lambda_r[i], profile.lambda_t[i], params.n, params.k);
  }
  return out;
}

CapField to_field(const RotProfile& profile, const GridPtr& grid) {
  if (std::abs(grid->theta() - profile.theta) > 1e-14) throw std::invalid_argument("to_field: angle mismatch");
  return CapField::sample(grid, [&](double b, double) { return profile.value_at(b); }, true);
}

RotSolveResult solve_rotsym(const std::vector<double>& phi, const CapParams& params, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  if (phi.size() < 9) throw std::invalid_argument("rotsym profile needs at least 8 cells");
  for (double v : phi) {
    if (!(v > 0.0)) throw std::invalid_argument("phi must be positive on every node");
  }
  RotProblem problem(params, phi);
  const double c = std::pow(binom(params.n, params.k), -1.0 / params.k);
  const std::vector<double> betas = profile_betas(static_cast<int>(phi.size()) - 1, params.theta);
  Eigen::VectorXd x0(problem.size());
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = c * ell(params.theta, betas[i]);
  ContinuationResult cr = continue_path(problem, std::move(x0), opts.schedule, opts.newton);

  RotSolveResult out;
  out.profile = make_profile(params.theta, std::vector<double>(cr.x.begin(), cr.x.end()));
  SolveReport& rep = out.report;
  rep.status = cr.status;
  rep.message = std::move(cr.message);
  rep.steps = std::move(cr.steps);
  rep.rejected_t = std::move(cr.rejected_t);
  rep.newton_histories = std::move(cr.newton_histories);
  rep.stalled_at = cr.stalled_at;
  const Eigen::VectorXd r = problem.residual(cr.x);
  const int rim = static_cast<int>(r.size()) - 1;
  rep.interior_residual = r.head(rim).cwiseAbs().maxCoeff();
  rep.robin_residual = std::abs(r[rim]);
  rep.lambda1_min = out.profile.lambda1_min();
  rep.s_min = cr.x.minCoeff();
  rep.s_max = cr.x.maxCoeff();
  if (rep.status == SolveStatus::converged &&
      std::max(rep.interior_residual, rep.robin_residual) > opts.newton.tol) {
    rep.status = SolveStatus::stalled;
    rep.message = "final residual above tolerance";
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

RotSolveResult solve_rotsym(const RotsymExpr& phi, int n_beta, const CapParams& params,
                            const SolverOptions& opts) {
  std::vector<double> v;
  for (double b : profile_betas(n_beta, params.theta)) v.push_back(phi(b));
  return solve_rotsym(v, params, opts);
}

void write_profile_csv(std::ostream& os, const RotProfile& profile, const CapParams& params) {
  const auto sig = rotsym_sigma_k(profile, params);
  os << "beta,s,lambda_r,lambda_t,sigma_k\n";
  for (std::size_t i = 0; i < profile.s.size(); ++i) {
    os << format_double(profile.beta[i]) << ',' << format_double(profile.s[i]) << ','
       << format_double(profile.lambda_r[i]) << ',' << format_double(profile.lambda_t[i]) << ','
       << format_double(sig[i]) << '\n';
  }
}

BarrierReport barrier_height_check(const RotProfile& profile, const CapParams& params) {
  BarrierReport out;
  const int rim = profile.n_beta();
  out.height = profile.value_at(0.0);
  out.r_in = profile.s[rim] / std::sin(profile.theta);
  out.Lambda = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < profile.s.size(); ++i) {
    const double c = std::cos(profile.beta[i]);
    const double det = std::pow(c, -(params.n + 2)) /
                       (profile.lambda_r[i] * std::pow(profile.lambda_t[i], params.n - 1));
    out.Lambda = std::min(out.Lambda, det);
  }
  out.bound = 0.5 * std::pow(out.Lambda, 1.0 / params.n) * out.r_in * out.r_in;
  out.margin = out.height - out.bound;
  out.pass = out.margin >= 0.0;
  return out;
}

}  // namespace caplp
