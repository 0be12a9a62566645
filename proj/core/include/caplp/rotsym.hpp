#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/field.hpp"
#include "caplp/solver.hpp"

namespace caplp {

/// phi(beta) = sum_i coef[i] (1 - cos beta)^i.
struct RotsymExpr {
  std::vector<double> coef;

  double operator()(double beta) const;
};

/// Rotationally symmetric profile on the cell-centred beta grid of an
/// n_beta-row cap grid (rows 0..n_beta-1 plus the rim node beta = theta).
struct RotProfile {
  double theta = 0.0;
  std::vector<double> beta;
  std::vector<double> s;
  std::vector<double> lambda_r;  // s'' + s
  std::vector<double> lambda_t;  // s' cot(beta) + s

  int n_beta() const { return static_cast<int>(s.size()) - 1; }
  /// Cubic interpolation in beta, using the even reflection across the pole.
  double value_at(double b) const;
  double lambda1_min() const;
};

/// Builds a profile from node values and fills in lambda_r, lambda_t.
RotProfile make_profile(double theta, std::vector<double> s);

/// sigma_k = C(n-1,k) lambda_t^k + C(n-1,k-1) lambda_r lambda_t^{k-1} per node.
std::vector<double> rotsym_sigma_k(const RotProfile& profile, const CapParams& params);

/// Lifts a profile to a 2-D field by interpolation.
CapField to_field(const RotProfile& profile, const GridPtr& grid);

struct RotSolveResult {
  RotProfile profile;
  SolveReport report;
};

/// Continuation for sigma_k(lambda(s)) = s^{q-1} H(t, phi) with s'(0) = 0 and
/// s'(theta) = cot(theta) s(theta), any n >= 2. phi holds one value per node
/// (n_beta + 1). Throws std::invalid_argument for invalid parameters or phi <= 0.
RotSolveResult solve_rotsym(const std::vector<double>& phi, const CapParams& params,
                            const SolverOptions& opts = {});

RotSolveResult solve_rotsym(const RotsymExpr& phi, int n_beta, const CapParams& params,
                            const SolverOptions& opts = {});

/// Node betas of an n_beta-row profile grid.
std::vector<double> profile_betas(int n_beta, double theta);

void write_profile_csv(std::ostream& os, const RotProfile& profile, const CapParams& params);

struct BarrierReport {
  double height = 0.0;       // H = s(0)
  double r_in = 0.0;         // boundary radius s(theta) / sin(theta)
  double Lambda = 0.0;       // min det D^2 f over the nodes
  double bound = 0.0;        // Lambda^{1/n} r_in^2 / 2
  double margin = 0.0;       // H - bound
  bool pass = false;
};

/// Height against the comparison-barrier bound for the graph f over the base disk,
/// with det D^2 f = cos(beta)^{-(n+2)} / (lambda_r lambda_t^{n-1}).
BarrierReport barrier_height_check(const RotProfile& profile, const CapParams& params);

}  // namespace caplp
