#include "caplp/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "caplp/finite_difference.hpp"

namespace caplp {

namespace {

std::vector<Tap> make_taps(const std::vector<int>& rows, const std::vector<double>& betas,
                           double at, int order) {
  const auto w = fd_weights(at, betas, order);
  std::vector<Tap> taps;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t] < 0) {
      taps.push_back({0, true, w[t]});
    } else {
      taps.push_back({rows[t], false, w[t]});
    }
  }
  return taps;
}

}  // namespace

CapGrid::CapGrid(int n_beta, int n_phi, double theta)
    : n_beta_(n_beta), n_phi_(n_phi), theta_(theta) {
  if (n_beta < 8 || n_phi < 8) {
    throw std::invalid_argument("grid too coarse: need n_beta >= 8 and n_phi >= 8, got " +
                                std::to_string(n_beta) + "x" + std::to_string(n_phi));
  }
  if (n_phi % 2 != 0) {
    throw std::invalid_argument("n_phi must be even, got " + std::to_string(n_phi));
  }
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw std::invalid_argument("grid angle must lie in (0, pi)");
  }
  const double h = theta / n_beta;
  beta_.resize(rows());
  weight_.assign(rows(), 0.0);
  for (int i = 0; i < n_beta; ++i) {
    beta_[i] = (i + 0.5) * h;
    weight_[i] = std::sin(beta_[i]) * h * h_phi();
  }
  beta_[n_beta] = theta;

  // Row -1 sits at -beta_0 and is closed across the pole.
  auto beta_of = [&](int r) { return r < 0 ? -beta_[0] : beta_[r]; };
  stencils_.resize(rows());
  for (int i = 0; i < rows(); ++i) {
    std::vector<int> r1;
    std::vector<int> r2;
    if (i <= n_beta - 2) {
      r1 = {i - 1, i, i + 1};
      r2 = r1;
    } else {
      // Last cell row and the rim: the rim is only h/2 away, so use one extra node
      // for the second derivative to keep second order.
      r1 = {n_beta - 2, n_beta - 1, n_beta};
      r2 = {n_beta - 3, n_beta - 2, n_beta - 1, n_beta};
    }
    std::vector<double> b1;
    std::vector<double> b2;
    for (int r : r1) b1.push_back(beta_of(r));
    for (int r : r2) b2.push_back(beta_of(r));
    stencils_[i].d1 = make_taps(r1, b1, beta_[i], 1);
    stencils_[i].d2 = make_taps(r2, b2, beta_[i], 2);
  }
}

double CapGrid::h_phi() const { return 2 * std::numbers::pi / n_phi_; }

double CapGrid::phi(int j) const { return 2 * std::numbers::pi * j / n_phi_; }

std::size_t CapGrid::node(int i, int j) const {
  int jj = j % n_phi_;
  if (jj < 0) jj += n_phi_;
  return static_cast<std::size_t>(i) * n_phi_ + jj;
}

std::size_t CapGrid::mirror(std::size_t nd) const {
  return node(row_of(nd), col_of(nd) + n_phi_ / 2);
}

std::vector<StencilEntry> CapGrid::local_stencil(int i, int j) const {
  std::vector<StencilEntry> out;
  out.reserve(20);
  const int half = n_phi_ / 2;
  const double hp = h_phi();
  auto push = [&](std::size_t nd, auto&& set) {
    StencilEntry e;
    e.node = nd;
    set(e.coef);
    out.push_back(e);
  };
  push(node(i, j), [](LocalJet& c) { c.s = 1.0; });

  const RowStencil& st = stencils_[i];
  for (const Tap& t : st.d1) {
    const int shift = t.across_pole ? half : 0;
    push(node(t.row, j + shift), [&](LocalJet& c) { c.b = t.w; });
    push(node(t.row, j + 1 + shift), [&](LocalJet& c) { c.bp = t.w / (2 * hp); });
    push(node(t.row, j - 1 + shift), [&](LocalJet& c) { c.bp = -t.w / (2 * hp); });
  }
  for (const Tap& t : st.d2) {
    const int shift = t.across_pole ? half : 0;
    push(node(t.row, j + shift), [&](LocalJet& c) { c.bb = t.w; });
  }
  push(node(i, j + 1), [&](LocalJet& c) {
    c.p = 1.0 / (2 * hp);
    c.pp = 1.0 / (hp * hp);
  });
  push(node(i, j - 1), [&](LocalJet& c) {
    c.p = -1.0 / (2 * hp);
    c.pp = 1.0 / (hp * hp);
  });
  push(node(i, j), [&](LocalJet& c) { c.pp = -2.0 / (hp * hp); });
  return out;
}

GridPtr make_grid(int n_beta, int n_phi, double theta) {
  return std::make_shared<const CapGrid>(n_beta, n_phi, theta);
}

CapField::CapField(GridPtr grid, std::vector<double> values, bool even)
    : grid_(std::move(grid)), values_(std::move(values)), even_(even) {
  if (!grid_) throw std::invalid_argument("CapField needs a grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("CapField: value count " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_->size()));
  }
}

CapField CapField::constant(GridPtr grid, double c) {
  const auto n = grid->size();
  return CapField(std::move(grid), std::vector<double>(n, c), true);
}

CapField CapField::sample(GridPtr grid, const CapillaryFunction& f) {
  return sample(std::move(grid), [&](double b, double p) { return f.value(b, p); }, true);
}

double CapField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double CapField::max() const { return *std::max_element(values_.begin(), values_.end()); }

CapField& CapField::operator+=(const CapField& o) {
  if (!grid_->same_layout(o.grid())) throw std::invalid_argument("CapField: grid mismatch");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  even_ = even_ && o.even_;
  return *this;
}

CapField& CapField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

CapField operator+(CapField a, const CapField& b) { return a += b; }
CapField operator-(CapField a, const CapField& b) { return a += (-1.0) * b; }
CapField operator*(double c, CapField a) { return a *= c; }

double max_abs_diff(const CapField& a, const CapField& b) {
  if (!a.grid().same_layout(b.grid())) throw std::invalid_argument("max_abs_diff: grid mismatch");
  double worst = 0.0;
  for (std::size_t n = 0; n < a.values().size(); ++n) {
    worst = std::max(worst, std::abs(a[n] - b[n]));
  }
  return worst;
}

LocalJet derivatives(const CapField& s, int i, int j) {
  // Derivative weights sum to zero; differencing against the centre keeps roundoff O(h).
  const double c = s(i, j);
  LocalJet d;
  for (const auto& e : s.grid().local_stencil(i, j)) d += (s[e.node] - c) * e.coef;
  d.s = c;
  return d;
}

CovariantHessian covariant_hessian(const LocalJet& d, double beta) {
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  return {d.bb, d.bp - (cb / sb) * d.p, d.pp + sb * cb * d.b};
}

std::vector<CovariantHessian> covariant_hessian(const CapField& s) {
  const CapGrid& g = s.grid();
  std::vector<CovariantHessian> out(g.size());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      out[g.node(i, j)] = covariant_hessian(derivatives(s, i, j), g.beta(i));
    }
  }
  return out;
}

SymEndo tau_from_jet(const LocalJet& d, double beta) {
  const double sb = std::sin(beta);
  const auto hess = covariant_hessian(d, beta);
  return {hess.bb + d.s, hess.bp / sb, hess.pp / (sb * sb) + d.s};
}

std::vector<double> TauField::sigma(int k) const {
  std::vector<double> out(tau.size());
  for (std::size_t n = 0; n < tau.size(); ++n) out[n] = sigma_k(tau[n], k);
  return out;
}

TauField tau_sharp(const CapField& s) {
  const CapGrid& g = s.grid();
  TauField out;
  out.grid = s.grid_ptr();
  out.tau.resize(g.size());
  out.eig.resize(g.size());
  out.lambda1_min = std::numeric_limits<double>::infinity();
  out.lambda1_min_interior = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      const auto nd = g.node(i, j);
      out.tau[nd] = tau_from_jet(derivatives(s, i, j), g.beta(i));
      out.eig[nd] = out.tau[nd].eigenvalues();
      out.lambda1_min = std::min(out.lambda1_min, out.eig[nd][0]);
      if (i < g.rim_row()) out.lambda1_min_interior = std::min(out.lambda1_min_interior, out.eig[nd][0]);
    }
  }
  return out;
}

std::vector<double> robin_residual(const CapField& s) {
  const CapGrid& g = s.grid();
  const int rim = g.rim_row();
  const double cot = 1.0 / std::tan(g.theta());
  std::vector<double> out(g.n_phi());
  for (int j = 0; j < g.n_phi(); ++j) {
    double db = 0.0;
    for (const Tap& t : g.row_stencil(rim).d1) db += t.w * s(t.row, j);
    out[j] = db - cot * s(rim, j);
  }
  return out;
}

double boundary_tau_identity_residual(const CapField& s) {
  const CapGrid& g = s.grid();
  const int rim = g.rim_row();
  const double b = g.theta();
  const double sb = std::sin(b);
  const double cb = std::cos(b);
  const double hp = g.h_phi();
  double worst = 0.0;
  for (int j = 0; j < g.n_phi(); ++j) {
    const LocalJet d = derivatives(s, rim, j);
    // d_beta of tau_pp = s_pp / sin^2 + cot s_b + s, expanded by the chain rule.
    double s_ppb = 0.0;
    for (const Tap& t : g.row_stencil(rim).d1) {
      s_ppb += t.w * (s(t.row, j + 1) - 2 * s(t.row, j) + s(t.row, j - 1)) / (hp * hp);
    }
    const double d_tpp = s_ppb / (sb * sb) - 2 * cb / (sb * sb * sb) * d.pp - d.b / (sb * sb) + (cb / sb) * d.bb + d.b;
    const SymEndo at_rim = tau_from_jet(d, b);
    worst = std::max(worst, std::abs(d_tpp - (at_rim.a11 - at_rim.a22) * cb / sb));
  }
  return worst;
}

double integrate(const GridPtr& grid, std::span<const double> values) {
  double acc = 0.0;
  for (int i = 0; i < grid->n_beta(); ++i) {
    double row = 0.0;
    for (int j = 0; j < grid->n_phi(); ++j) row += values[grid->node(i, j)];
    acc += grid->weight(i) * row;
  }
  return acc;
}

double integrate(const CapField& s) { return integrate(s.grid_ptr(), s.values()); }

CapField project_even(const CapField& s) {
  const CapGrid& g = s.grid();
  std::vector<double> v(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) v[n] = 0.5 * (s[n] + s[g.mirror(n)]);
  return CapField(s.grid_ptr(), std::move(v), true);
}

double evenness_defect(const CapField& s) {
  const CapGrid& g = s.grid();
  double worst = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) worst = std::max(worst, std::abs(s[n] - s[g.mirror(n)]));
  return worst;
}

}  // namespace caplp
