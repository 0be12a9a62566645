#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/symfunc.hpp"

namespace caplp {

/// One term of a one-dimensional stencil in beta. A tap with across_pole set
/// refers to beta = -beta_0, which is closed through s(-beta, phi) = s(beta, phi + pi).
struct Tap {
  int row = 0;
  bool across_pole = false;
  double w = 0.0;
};

struct RowStencil {
  std::vector<Tap> d1;
  std::vector<Tap> d2;
};

/// Contribution of one node value to the six local derivatives at a node.
struct StencilEntry {
  std::size_t node = 0;
  LocalJet coef;
};

/// Structured (beta, phi) grid over the cap.
///
/// Rows 0..n_beta-1 are cell centres beta_i = (i + 1/2) theta / n_beta, half a
/// cell away from the pole; row n_beta is the rim ring beta = theta. Columns are
/// phi_j = 2 pi j / n_phi with n_phi even so the across-pole closure and the
/// evenness reflection map nodes to nodes.
class CapGrid {
 public:
  /// Throws std::invalid_argument for n_beta < 8, n_phi < 8, odd n_phi, or theta outside (0, pi).
  CapGrid(int n_beta, int n_phi, double theta);

  int n_beta() const { return n_beta_; }
  int n_phi() const { return n_phi_; }
  int rows() const { return n_beta_ + 1; }
  int rim_row() const { return n_beta_; }
  double theta() const { return theta_; }
  double h_beta() const { return theta_ / n_beta_; }
  double h_phi() const;
  std::size_t size() const { return static_cast<std::size_t>(rows()) * n_phi_; }

  double beta(int i) const { return beta_[i]; }
  double phi(int j) const;

  /// Flat row-major index; j is taken modulo n_phi.
  std::size_t node(int i, int j) const;
  int row_of(std::size_t node) const { return static_cast<int>(node / n_phi_); }
  int col_of(std::size_t node) const { return static_cast<int>(node % n_phi_); }
  /// Index of the node reflected by phi -> phi + pi.
  std::size_t mirror(std::size_t node) const;

  /// Midpoint-rule area weight sin(beta_i) h_beta h_phi; zero on the rim ring.
  double weight(int i) const { return weight_[i]; }

  const RowStencil& row_stencil(int i) const { return stencils_[i]; }

  /// Linear stencil giving (s, s_b, s_p, s_bb, s_bp, s_pp) at node (i, j).
  std::vector<StencilEntry> local_stencil(int i, int j) const;

  bool same_layout(const CapGrid& o) const {
    return n_beta_ == o.n_beta_ && n_phi_ == o.n_phi_ && theta_ == o.theta_;
  }

 private:
  int n_beta_;
  int n_phi_;
  double theta_;
  std::vector<double> beta_;
  std::vector<double> weight_;
  std::vector<RowStencil> stencils_;
};

using GridPtr = std::shared_ptr<const CapGrid>;

GridPtr make_grid(int n_beta, int n_phi, double theta);

/// Scalar field with one value per grid node (rim ring included).
class CapField {
 public:
  CapField(GridPtr grid, std::vector<double> values, bool even = false);

  static CapField constant(GridPtr grid, double c);

  template <class Fn>
    requires std::invocable<Fn&, double, double>
  static CapField sample(GridPtr grid, Fn&& fn, bool even = false) {
    std::vector<double> v(grid->size());
    for (int i = 0; i < grid->rows(); ++i) {
      for (int j = 0; j < grid->n_phi(); ++j) v[grid->node(i, j)] = fn(grid->beta(i), grid->phi(j));
    }
    return CapField(std::move(grid), std::move(v), even);
  }

  static CapField sample(GridPtr grid, const CapillaryFunction& f);

  const CapGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  double operator()(int i, int j) const { return values_[grid_->node(i, j)]; }
  double operator[](std::size_t node) const { return values_[node]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  bool even() const { return even_; }
  void set_even(bool e) { even_ = e; }

  double min() const;
  double max() const;

  CapField& operator+=(const CapField& o);
  CapField& operator*=(double c);

 private:
  GridPtr grid_;
  std::vector<double> values_;
  bool even_ = false;
};

CapField operator+(CapField a, const CapField& b);
CapField operator-(CapField a, const CapField& b);
CapField operator*(double c, CapField a);

/// Max-norm of a - b over all nodes.
double max_abs_diff(const CapField& a, const CapField& b);

/// Finite-difference derivatives at a node.
LocalJet derivatives(const CapField& s, int i, int j);

struct CovariantHessian {
  double bb = 0.0;
  double bp = 0.0;
  double pp = 0.0;
};

/// Covariant Hessian of the round metric in (beta, phi):
///   s_bb,  s_bp - cot(b) s_p,  s_pp + sin(b) cos(b) s_b.
CovariantHessian covariant_hessian(const LocalJet& d, double beta);
std::vector<CovariantHessian> covariant_hessian(const CapField& s);

/// tau#[s] = g^{-1}(Hess s + s g) in the orthonormal frame (e_beta, e_phi / sin beta).
/// Linear in the jet, so it also maps stencil coefficients to their contribution.
SymEndo tau_from_jet(const LocalJet& d, double beta);

struct TauField {
  GridPtr grid;
  std::vector<SymEndo> tau;                  // per node, rim ring included
  std::vector<std::array<double, 2>> eig;    // ascending eigenvalues
  double lambda1_min = 0.0;                  // over all nodes
  double lambda1_min_interior = 0.0;         // rim ring excluded

  const SymEndo& at(int i, int j) const { return tau[grid->node(i, j)]; }
  std::vector<double> sigma(int k) const;
};

TauField tau_sharp(const CapField& s);

/// d_beta s - cot(theta) s on the rim ring, one value per column.
std::vector<double> robin_residual(const CapField& s);

/// max over rim columns of |d_mu tau_pp - (tau_mumu - tau_pp) cot(theta)|
/// in the orthonormal frame.
double boundary_tau_identity_residual(const CapField& s);

/// Quadrature sum_ij s_ij w_i over the cap.
double integrate(const CapField& s);
double integrate(const GridPtr& grid, std::span<const double> values);

/// s(b, phi) <- (s(b, phi) + s(b, phi + pi)) / 2.
CapField project_even(const CapField& s);

/// max |s(b, phi) - s(b, phi + pi)|.
double evenness_defect(const CapField& s);

}  // namespace caplp
