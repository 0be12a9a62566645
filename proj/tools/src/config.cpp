#include "caplp_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "caplp/field_io.hpp"
#include "caplp/rotsym.hpp"

namespace caplp::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_factor(const std::string& text) {
  const std::string t = trim(text);
  if (t == "pi") return std::numbers::pi;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("not a number: '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("not an integer: '" + text + "'");
  }
  return v;
}

PhiKind parse_kind(const std::string& text) {
  const std::string t = trim(text);
  if (t == "constant") return PhiKind::constant;
  if (t == "cap_manufactured") return PhiKind::cap_manufactured;
  if (t == "rotsym_expr") return PhiKind::rotsym_expr;
  if (t == "file") return PhiKind::file;
  throw ConfigError("unknown phi.kind '" + t + "'");
}

}  // namespace

std::string to_string(PhiKind kind) {
  switch (kind) {
    case PhiKind::constant:
      return "constant";
    case PhiKind::cap_manufactured:
      return "cap_manufactured";
    case PhiKind::rotsym_expr:
      return "rotsym_expr";
    case PhiKind::file:
      return "file";
  }
  return "unknown";
}

double parse_number(const std::string& text) {
  // Products and quotients of numbers and "pi", evaluated left to right.
  const std::string t = trim(text);
  double acc = 1.0;
  char op = '*';
  std::size_t start = 0;
  for (std::size_t i = 0; i <= t.size(); ++i) {
    if (i == t.size() || t[i] == '*' || t[i] == '/') {
      const double f = parse_factor(t.substr(start, i - start));
      acc = op == '*' ? acc * f : acc / f;
      if (i < t.size()) op = t[i];
      start = i + 1;
    }
  }
  if (!std::isfinite(acc)) throw ConfigError("not a finite number: '" + t + "'");
  return acc;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ConfigError("grid must look like 64x128, got '" + text + "'");
  return {parse_int(text.substr(0, x)), parse_int(text.substr(x + 1))};
}

void RunConfig::validate() const {
  params.validate();
  if (n_beta < 8 || n_phi < 8 || n_phi % 2 != 0) {
    throw std::invalid_argument("grid must have Nbeta >= 8 and even Nphi >= 8");
  }
  switch (phi_kind) {
    case PhiKind::constant:
      if (phi_params.size() != 1 || !(phi_params[0] > 0.0)) {
        throw std::invalid_argument("phi.kind = constant needs one positive parameter");
      }
      break;
    case PhiKind::cap_manufactured:
      if (phi_params.size() != 1 || !(phi_params[0] > 0.0)) {
        throw std::invalid_argument("phi.kind = cap_manufactured needs one positive radius");
      }
      break;
    case PhiKind::rotsym_expr:
      if (phi_params.empty()) throw std::invalid_argument("phi.kind = rotsym_expr needs coefficients");
      break;
    case PhiKind::file:
      if (phi_file.empty()) throw std::invalid_argument("phi.kind = file needs phi.file");
      break;
  }
  const Schedule& s = solver.schedule;
  if (!(s.dt_min > 0.0 && s.dt0 >= s.dt_min && s.dt_max >= s.dt0 && s.dt_max <= 1.0)) {
    throw std::invalid_argument("schedule needs 0 < dt_min <= dt0 <= dt_max <= 1");
  }
  if (!(solver.newton.tol > 0.0)) throw std::invalid_argument("tol.solve must be positive");
  if (rotsym_n_beta < 8) throw std::invalid_argument("rotsym.Nbeta must be >= 8");
  for (double p : sweep_p) {
    if (!std::isfinite(p)) throw std::invalid_argument("sweep.p must be finite");
  }
}

RunConfig parse_config(std::istream& is, const std::string& origin) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n") {
        cfg.params.n = parse_int(value);
      } else if (key == "k") {
        cfg.params.k = parse_int(value);
      } else if (key == "p") {
        cfg.params.p = parse_number(value);
      } else if (key == "theta") {
        cfg.params.theta = parse_number(value);
      } else if (key == "grid.Nbeta") {
        cfg.n_beta = parse_int(value);
      } else if (key == "grid.Nphi") {
        cfg.n_phi = parse_int(value);
      } else if (key == "phi.kind") {
        cfg.phi_kind = parse_kind(value);
      } else if (key == "phi.params") {
        cfg.phi_params = parse_list(value);
      } else if (key == "phi.file") {
        cfg.phi_file = value;
      } else if (key == "schedule.dt0") {
        cfg.solver.schedule.dt0 = parse_number(value);
      } else if (key == "schedule.dt_min") {
        cfg.solver.schedule.dt_min = parse_number(value);
      } else if (key == "schedule.dt_max") {
        cfg.solver.schedule.dt_max = parse_number(value);
      } else if (key == "tol.solve") {
        cfg.solver.newton.tol = parse_number(value);
      } else if (key == "tol.cone") {
        cfg.solver.newton.delta_cone = parse_number(value);
      } else if (key == "tol.verify") {
        cfg.verify_tol = parse_number(value);
      } else if (key == "newton.max_iterations") {
        cfg.solver.newton.max_iterations = parse_int(value);
      } else if (key == "solution") {
        cfg.solution_file = value;
      } else if (key == "rotsym.Nbeta") {
        cfg.rotsym_n_beta = parse_int(value);
      } else if (key == "sweep.p") {
        cfg.sweep_p = parse_list(value);
      } else if (key == "sweep.theta") {
        cfg.sweep_theta = parse_list(value);
      } else if (key == "sweep.workers") {
        cfg.workers = parse_int(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const std::logic_error&) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_config(in, path);
}

GridPtr make_config_grid(const RunConfig& cfg) { return make_grid(cfg.n_beta, cfg.n_phi, cfg.params.theta); }

CapField build_phi(const RunConfig& cfg, const GridPtr& grid) {
  const CapParams& P = cfg.params;
  const double theta = P.theta;
  switch (cfg.phi_kind) {
    case PhiKind::constant:
      return CapField::constant(grid, cfg.phi_params[0]);
    case PhiKind::cap_manufactured: {
      const double r = cfg.phi_params[0];
      const double c = binom(P.n, P.k) * std::pow(r, P.k + 1.0 - P.p);
      return CapField::sample(grid, [&](double b, double) { return c * std::pow(ell(theta, b), 1.0 - P.p); }, true);
    }
    case PhiKind::rotsym_expr: {
      const RotsymExpr e{cfg.phi_params};
      return CapField::sample(grid, [&](double b, double) { return e(b); }, true);
    }
    case PhiKind::file: {
      CapField f = read_field_csv(cfg.phi_file);
      if (f.grid().n_beta() != grid->n_beta() || f.grid().n_phi() != grid->n_phi() ||
          std::abs(f.grid().theta() - grid->theta()) > 1e-12) {
        throw ConfigError("phi.file grid does not match the configured grid");
      }
      return CapField(grid, std::vector<double>(f.values().begin(), f.values().end()), evenness_defect(f) == 0.0);
    }
  }
  throw ConfigError("unhandled phi kind");
}

std::optional<CapField> exact_solution(const RunConfig& cfg, const GridPtr& grid) {
  if (cfg.phi_kind != PhiKind::cap_manufactured) return std::nullopt;
  const double r = cfg.phi_params[0];
  const double theta = cfg.params.theta;
  return CapField::sample(grid, [&](double b, double) { return r * ell(theta, b); }, true);
}

std::vector<double> build_phi_profile(const RunConfig& cfg, const std::vector<double>& betas) {
  const CapParams& P = cfg.params;
  std::vector<double> out;
  for (double b : betas) {
    switch (cfg.phi_kind) {
      case PhiKind::constant:
        out.push_back(cfg.phi_params[0]);
        break;
      case PhiKind::cap_manufactured:
        out.push_back(binom(P.n, P.k) * std::pow(cfg.phi_params[0], P.k + 1.0 - P.p) *
                      std::pow(ell(P.theta, b), 1.0 - P.p));
        break;
      case PhiKind::rotsym_expr:
        out.push_back(RotsymExpr{cfg.phi_params}(b));
        break;
      case PhiKind::file:
        throw ConfigError("the 1-D oracle needs a rotationally symmetric phi kind, not a file");
    }
  }
  return out;
}

}  // namespace caplp::cli
