#include "caplp_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "caplp/field_io.hpp"
#include "caplp/homotopy.hpp"
#include "caplp/samples.hpp"

namespace caplp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mutex log_mutex;

void say(const RunConfig& cfg, const std::string& msg) {
  if (cfg.quiet) return;
  std::lock_guard lock(log_mutex);
  std::cout << msg << '\n';
}

void complain(const std::string& msg) {
  std::lock_guard lock(log_mutex);
  std::cerr << "caplp: " << msg << '\n';
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << std::scientific << x;
  return os.str();
}

void require_2d(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.params.n != 2) throw std::invalid_argument("the 2-D solver supports n = 2 only");
}

struct MemberResult {
  int exit = Exit::ok;
  double height = std::numeric_limits<double>::quiet_NaN();
  double lambda1_path = std::numeric_limits<double>::quiet_NaN();
  double s_max = std::numeric_limits<double>::quiet_NaN();
  std::size_t steps = 0;
  std::string message;
};

MemberResult run_solve(const RunConfig& cfg) {
  MemberResult res;
  CapField phi = CapField::constant(make_grid(8, 8, 1.0), 1.0);
  try {
    require_2d(cfg);
    phi = build_phi(cfg, make_config_grid(cfg));
  } catch (const std::exception& e) {
    res.exit = Exit::bad_input;
    res.message = e.what();
    return res;
  }
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  json report = {{"config", to_json(cfg)}};
  report["structural"] = to_json(structural_hypothesis_check(phi, cfg.params));
  SolveResult sol{phi, {}};
  try {
    sol = solve_path(phi, cfg.params, cfg.solver);
  } catch (const std::invalid_argument& e) {
    res.exit = Exit::bad_input;
    res.message = e.what();
    return res;
  }
  const SolveReport& rep = sol.report;
  report["solve"] = to_json(rep);
  res.steps = rep.steps.size();
  res.s_max = rep.s_max;
  res.lambda1_path = std::numeric_limits<double>::infinity();
  for (const auto& st : rep.steps) res.lambda1_path = std::min(res.lambda1_path, st.lambda1_min);
  say(cfg, "solve: " + std::to_string(rep.steps.size()) + " accepted steps, " +
               std::to_string(rep.rejected_t.size()) + " rejected, residual " + fmt(rep.interior_residual) +
               " / " + fmt(rep.robin_residual) + ", lambda1 min " + fmt(rep.lambda1_min) + ", " +
               fmt(rep.wall_seconds) + " s");

  if (rep.status != SolveStatus::converged) {
    write_field_csv((dir / "last_iterate.csv").string(), sol.solution);
    write_json(dir / "report.json", report);
    res.exit = Exit::stalled;
    res.message = rep.message;
    return res;
  }
  write_field_csv((dir / "solution.csv").string(), sol.solution);
  if (const auto exact = exact_solution(cfg, sol.solution.grid_ptr())) {
    report["manufactured_error"] = max_abs_diff(sol.solution, *exact);
    say(cfg, "solve: max |s - r ell| = " + fmt(report["manufactured_error"].get<double>()));
  }
  const AuditReport audit = estimates_audit(sol.solution, phi, cfg.params, &rep);
  report["audit"] = to_json(audit);
  if (const AuditRecord* h = audit.find("height_positive")) res.height = h->lhs;
  if (rep.lambda1_min > 0.0) {
    std::ofstream emb(dir / "embedding.csv");
    write_embedding_csv(emb, reconstruct(sol.solution));
  }
  write_json(dir / "report.json", report);
  for (const auto& a : audit.records) {
    if (a.mandatory && !a.pass) say(cfg, "audit failed: " + a.name + " (" + a.ref + ")");
  }
  res.exit = audit.pass() ? Exit::ok : Exit::audit_failed;
  if (res.exit != Exit::ok) res.message = "estimate audit failed";
  return res;
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
  const MemberResult r = run_solve(cfg);
  if (r.exit != Exit::ok) complain(r.message);
  return r.exit;
}

int cmd_verify(const RunConfig& cfg) {
  CapField phi = CapField::constant(make_grid(8, 8, 1.0), 1.0);
  CapField s = phi;
  try {
    require_2d(cfg);
    if (cfg.solution_file.empty()) throw ConfigError("verify needs a solution file");
    const GridPtr grid = make_config_grid(cfg);
    s = read_field_csv(cfg.solution_file);
    if (s.grid().n_beta() != grid->n_beta() || s.grid().n_phi() != grid->n_phi() ||
        std::abs(s.grid().theta() - grid->theta()) > 1e-12) {
      throw ConfigError("solution grid " + std::to_string(s.grid().n_beta()) + "x" +
                        std::to_string(s.grid().n_phi()) + " does not match the configured grid");
    }
    s = CapField(grid, std::vector<double>(s.values().begin(), s.values().end()), true);
    phi = build_phi(cfg, grid);
  } catch (const std::exception& e) {
    complain(e.what());
    return Exit::bad_input;
  }
  const double h = s.grid().h_beta();
  const double tol = cfg.verify_tol.value_or(10.0 * h * h * std::max(1.0, phi.max()));
  json report = {{"config", to_json(cfg)}, {"solution", cfg.solution_file}, {"tolerance", tol}};

  bool pass = s.min() > 0.0;
  report["s_min"] = s.min();
  if (pass) {
    const ResidualPair rp = residual_pair(s, cfg.params.p, phi.values(), cfg.params.k);
    report["interior_residual"] = rp.interior_norm;
    report["robin_residual"] = rp.boundary_norm;
    report["evenness_defect"] = evenness_defect(s);
    pass = rp.interior_norm <= tol && rp.boundary_norm <= tol;
    say(cfg, "verify: residual " + fmt(rp.interior_norm) + " / " + fmt(rp.boundary_norm) + " (tolerance " +
                 fmt(tol) + ")");
    const AuditReport audit = estimates_audit(s, phi, cfg.params);
    report["audit"] = to_json(audit);
    pass = pass && audit.pass();
  }
  report["pass"] = pass;
  fs::create_directories(cfg.out_dir);
  write_json(fs::path(cfg.out_dir) / "verify.json", report);
  if (!pass) complain("verification failed");
  return pass ? Exit::ok : Exit::audit_failed;
}

int cmd_oracle(const RunConfig& cfg) {
  std::vector<double> phi;
  try {
    cfg.validate();
    phi = build_phi_profile(cfg, profile_betas(cfg.rotsym_n_beta, cfg.params.theta));
  } catch (const std::exception& e) {
    complain(e.what());
    return Exit::bad_input;
  }
  const RotSolveResult res = solve_rotsym(phi, cfg.params, cfg.solver);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  json report = {{"config", to_json(cfg)}, {"solve", to_json(res.report)}};
  say(cfg, "oracle: " + std::to_string(res.report.steps.size()) + " accepted steps, residual " +
               fmt(res.report.interior_residual) + ", lambda1 min " + fmt(res.report.lambda1_min));
  if (res.report.status != SolveStatus::converged) {
    write_json(dir / "oracle.json", report);
    complain(res.report.message);
    return Exit::stalled;
  }
  {
    std::ofstream out(dir / "profile.csv");
    write_profile_csv(out, res.profile, cfg.params);
  }
  report["barrier"] = to_json(barrier_height_check(res.profile, cfg.params));
  if (!cfg.solution_file.empty()) {
    try {
      const CapField s = read_field_csv(cfg.solution_file);
      if (std::abs(s.grid().theta() - cfg.params.theta) > 1e-12) throw ConfigError("solution angle differs");
      const double gap = max_abs_diff(s, to_field(res.profile, s.grid_ptr()));
      report["gap_2d"] = gap;
      say(cfg, "oracle: max gap to the 2-D solution " + fmt(gap));
    } catch (const std::exception& e) {
      complain(e.what());
      return Exit::bad_input;
    }
  }
  write_json(dir / "oracle.json", report);
  return Exit::ok;
}

int cmd_sweep(const RunConfig& cfg) {
  const std::vector<double> ps = cfg.sweep_p.empty() ? std::vector<double>{cfg.params.p} : cfg.sweep_p;
  const std::vector<double> thetas =
      cfg.sweep_theta.empty() ? std::vector<double>{cfg.params.theta} : cfg.sweep_theta;
  std::vector<RunConfig> members;
  for (double p : ps) {
    for (double th : thetas) {
      RunConfig m = cfg;
      m.params.p = p;
      m.params.theta = th;
      m.quiet = true;
      std::ostringstream name;
      name << "member_" << (members.size() < 10 ? "0" : "") << members.size();
      m.out_dir = (fs::path(cfg.out_dir) / name.str()).string();
      members.push_back(std::move(m));
    }
  }
  std::vector<MemberResult> results(members.size());
  std::atomic<std::size_t> next{0};
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::clamp(cfg.workers > 0 ? cfg.workers : hw, 1, static_cast<int>(members.size()));
  auto work = [&] {
    for (std::size_t i = next++; i < members.size(); i = next++) {
      try {
        results[i] = run_solve(members[i]);
      } catch (const std::exception& e) {
        results[i].exit = Exit::stalled;
        results[i].message = e.what();
      }
      say(cfg, "sweep: member " + std::to_string(i) + " exit " + std::to_string(results[i].exit));
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  fs::create_directories(cfg.out_dir);
  json table = json::array();
  std::ofstream csv(fs::path(cfg.out_dir) / "sweep_summary.csv");
  csv << "member,p,theta,exit,height,lambda1_path_min,max_s,steps\n";
  double min_h = std::numeric_limits<double>::infinity();
  bool all_ok = true;
  int worst = Exit::ok;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const MemberResult& r = results[i];
    all_ok = all_ok && r.exit == Exit::ok;
    worst = std::max(worst, r.exit);
    if (r.exit == Exit::ok) min_h = std::min(min_h, r.height);
    csv << i << ',' << format_double(members[i].params.p) << ',' << format_double(members[i].params.theta) << ','
        << r.exit << ',' << format_double(r.height) << ',' << format_double(r.lambda1_path) << ','
        << format_double(r.s_max) << ',' << r.steps << '\n';
    table.push_back({{"member", i},
                     {"p", members[i].params.p},
                     {"theta", members[i].params.theta},
                     {"exit", r.exit},
                     {"height", r.height},
                     {"lambda1_path_min", r.lambda1_path},
                     {"max_s", r.s_max},
                     {"steps", r.steps},
                     {"message", r.message}});
  }
  json summary = {{"config", to_json(cfg)}, {"members", table}, {"all_ok", all_ok}};
  if (std::isfinite(min_h)) summary["min_height"] = min_h;
  write_json(fs::path(cfg.out_dir) / "sweep.json", summary);
  say(cfg, "sweep: " + std::to_string(members.size()) + " members, min H " + fmt(min_h));
  return worst;
}

int cmd_selftest(const RunConfig& cfg) {
  const double theta = cfg.params.theta;
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, double value, double limit) {
    const bool pass = value <= limit;
    all = all && pass;
    checks.push_back({{"name", name}, {"value", value}, {"limit", limit}, {"pass", pass}});
    say(cfg, std::string(pass ? "PASS " : "FAIL ") + name + " " + fmt(value) + " <= " + fmt(limit));
  };
  try {
    cfg.params.validate();
    CapParams P = cfg.params;
    P.n = 2;
    const GridPtr grid = make_grid(32, 64, theta);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.5, 2.0);
    std::vector<double> phi(64);
    for (double& v : phi) v = U(rng);

    double end_gap = 0.0;
    const HomotopyRhs h0 = homotopy_rhs(0.0, phi, P);
    const HomotopyRhs h1 = homotopy_rhs(1.0, phi, P);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      end_gap = std::max({end_gap, std::abs(h0.rhs[i] - 1.0), std::abs(h1.rhs[i] - phi[i])});
    }
    check("homotopy_endpoints", end_gap, 0.0);

    const TauField t = tau_sharp(CapField::sample(grid, model_function(theta)));
    double dev = 0.0;
    for (const auto& a : t.tau) dev = std::max({dev, std::abs(a.a11 - 1.0), std::abs(a.a12), std::abs(a.a22 - 1.0)});
    check("tau_of_ell_is_identity", dev, 1e-3);

    const CapField s = CapField::sample(grid, random_convex_test_function(theta, cfg.seed, 0.3));
    const CapField v = CapField::sample(grid, random_convex_test_function(theta, cfg.seed + 1, 0.5));
    std::vector<double> rhs(grid->size());
    for (double& x : rhs) x = U(rng);
    check("jacobian_consistency", jacobian_fd_check(s, v, P.p, rhs, P.k).rel_error, 1e-5);

    const CapQuadrature quad{theta, 2, 64};
    const CapSamples a = samples_from_function(random_convex_test_function(theta, cfg.seed + 2, 0.3), quad);
    const CapSamples b = samples_from_function(random_convex_test_function(theta, cfg.seed + 3, 0.3), quad);
    const CapSamples* ab[] = {&a, &b};
    const CapSamples* ba[] = {&b, &a};
    const double vab = mixed_volume(ab);
    check("mixed_volume_symmetry", std::abs(vab - mixed_volume(ba)) / std::abs(vab), 1e-8);

    RunConfig man = cfg;
    man.params = P;
    man.n_beta = 16;
    man.n_phi = 32;
    man.phi_kind = PhiKind::cap_manufactured;
    man.phi_params = {1.3};
    const GridPtr g16 = make_config_grid(man);
    const SolveResult res = solve_path(build_phi(man, g16), P, cfg.solver);
    const double err = res.report.status == SolveStatus::converged ? max_abs_diff(res.solution, *exact_solution(man, g16))
                                                                    : std::numeric_limits<double>::infinity();
    check("manufactured_cap_16x32", err, 5e-3);
  } catch (const std::invalid_argument& e) {
    complain(e.what());
    return Exit::bad_input;
  }
  fs::create_directories(cfg.out_dir);
  write_json(fs::path(cfg.out_dir) / "selftest.json", {{"seed", cfg.seed}, {"checks", checks}, {"pass", all}});
  return all ? Exit::ok : Exit::audit_failed;
}

}  // namespace caplp::cli
