#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "caplp_cli/commands.hpp"
#include "caplp_cli/config.hpp"

int main(int argc, char** argv) {
  using namespace caplp::cli;
  CLI::App app{"caplp: capillary L_p Christoffel-Minkowski solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string grid;
  std::string solution;
  std::uint64_t seed = 0;
  bool quiet = false;
  bool have_seed = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--grid", grid, "grid override, e.g. 64x128");
    sub->add_option("--seed", seed, "seed for randomized checks")->each([&](const std::string&) { have_seed = true; });
    sub->add_flag("--quiet", quiet, "suppress progress output");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve along the continuation path and audit the result");
  CLI::App* verify = app.add_subcommand("verify", "re-check a stored solution");
  CLI::App* oracle = app.add_subcommand("oracle", "rotationally symmetric 1-D solve");
  CLI::App* sweep = app.add_subcommand("sweep", "independent solves over sweep.p x sweep.theta");
  CLI::App* selftest = app.add_subcommand("selftest", "quick internal consistency checks");
  for (CLI::App* sub : {solve, verify, oracle, sweep, selftest}) add_common(sub);
  verify->add_option("--solution", solution, "solution CSV")->required();
  oracle->add_option("--solution", solution, "2-D solution CSV for the cross-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::bad_input;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (!selftest->parsed()) {
      throw ConfigError("--config is required");
    }
    if (!grid.empty()) std::tie(cfg.n_beta, cfg.n_phi) = parse_grid(grid);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!solution.empty()) cfg.solution_file = solution;
    if (have_seed) cfg.seed = seed;
    cfg.quiet = quiet;
  } catch (const std::exception& e) {
    std::cerr << "caplp: " << e.what() << '\n';
    return Exit::bad_input;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (oracle->parsed()) return cmd_oracle(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    return cmd_selftest(cfg);
  } catch (const std::exception& e) {
    std::cerr << "caplp: " << e.what() << '\n';
    return Exit::bad_input;
  }
}
