#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "caplp/cap_geometry.hpp"
#include "caplp/field.hpp"
#include "caplp/solver.hpp"

namespace caplp::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PhiKind { constant, cap_manufactured, rotsym_expr, file };

std::string to_string(PhiKind kind);

struct RunConfig {
  CapParams params;
  int n_beta = 32;
  int n_phi = 64;
  PhiKind phi_kind = PhiKind::constant;
  std::vector<double> phi_params{1.0};
  std::string phi_file;
  SolverOptions solver;
  std::optional<double> verify_tol;  // default: 10 h_beta^2 max(1, max phi)
  std::string solution_file;
  int rotsym_n_beta = 512;
  std::vector<double> sweep_p;
  std::vector<double> sweep_theta;
  int workers = 0;  // 0: hardware concurrency
  std::uint64_t seed = 20240601;
  std::string out_dir = "out";
  bool quiet = false;

  /// Throws std::invalid_argument on range violations.
  void validate() const;
};

/// Parses "a", "pi", "pi/3", "0.25*pi", "2*pi/5"; throws ConfigError otherwise.
double parse_number(const std::string& text);
std::vector<double> parse_list(const std::string& text);

/// key = value lines; '#' starts a comment. Unknown keys are errors.
RunConfig parse_config(std::istream& is, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// "64x128" -> (64, 128).
std::pair<int, int> parse_grid(const std::string& text);

GridPtr make_config_grid(const RunConfig& cfg);

/// Data phi on the configured grid. Throws ConfigError for a file whose grid differs.
CapField build_phi(const RunConfig& cfg, const GridPtr& grid);

/// Exact solution of the manufactured problem, if the phi kind has one.
std::optional<CapField> exact_solution(const RunConfig& cfg, const GridPtr& grid);

/// Profile values of a rotationally symmetric phi kind; throws ConfigError otherwise.
std::vector<double> build_phi_profile(const RunConfig& cfg, const std::vector<double>& betas);

}  // namespace caplp::cli
