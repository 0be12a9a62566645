#include "caplp_cli/commands.hpp"

namespace caplp::cli {

using nlohmann::json;

json to_json(const SolveReport& r, bool timing) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"t", s.t},
                     {"q", s.q},
                     {"dt", s.dt},
                     {"newton_iterations", s.newton_iterations},
                     {"residual", s.residual},
                     {"lambda1_min", s.lambda1_min},
                     {"s_min", s.s_min},
                     {"s_max", s.s_max}});
  }
  json out = {{"status", r.status == SolveStatus::converged ? "converged" : "stalled"},
              {"message", r.message},
              {"steps", steps},
              {"rejected_t", r.rejected_t},
              {"newton_histories", r.newton_histories},
              {"interior_residual", r.interior_residual},
              {"robin_residual", r.robin_residual},
              {"lambda1_min", r.lambda1_min},
              {"s_min", r.s_min},
              {"s_max", r.s_max}};
  if (r.status != SolveStatus::converged) out["stalled_at"] = r.stalled_at;
  if (timing) out["wall_seconds"] = r.wall_seconds;
  return out;
}

json to_json(const AuditReport& r) {
  json records = json::array();
  for (const auto& a : r.records) {
    records.push_back({{"name", a.name},
                       {"ref", a.ref},
                       {"lhs", a.lhs},
                       {"rhs", a.rhs},
                       {"margin", a.margin},
                       {"pass", a.pass},
                       {"mandatory", a.mandatory}});
  }
  return {{"pass", r.pass()}, {"records", records}};
}

json to_json(const StructuralReport& r) {
  return {{"interior_margin", r.interior_margin},
          {"boundary_margin", r.boundary_margin},
          {"interior_pass", r.interior_pass},
          {"boundary_pass", r.boundary_pass}};
}

json to_json(const BarrierReport& r) {
  return {{"height", r.height}, {"r_in", r.r_in},     {"Lambda", r.Lambda},
          {"bound", r.bound},   {"margin", r.margin}, {"pass", r.pass}};
}

json to_json(const RunConfig& cfg) {
  json out = {{"n", cfg.params.n},
              {"k", cfg.params.k},
              {"p", cfg.params.p},
              {"theta", cfg.params.theta},
              {"grid", {{"Nbeta", cfg.n_beta}, {"Nphi", cfg.n_phi}}},
              {"phi", {{"kind", to_string(cfg.phi_kind)}, {"params", cfg.phi_params}}},
              {"schedule",
               {{"dt0", cfg.solver.schedule.dt0},
                {"dt_min", cfg.solver.schedule.dt_min},
                {"dt_max", cfg.solver.schedule.dt_max}}},
              {"tol", {{"solve", cfg.solver.newton.tol}, {"cone", cfg.solver.newton.delta_cone}}},
              {"seed", cfg.seed}};
  if (cfg.phi_kind == PhiKind::file) out["phi"]["file"] = cfg.phi_file;
  return out;
}

}  // namespace caplp::cli
