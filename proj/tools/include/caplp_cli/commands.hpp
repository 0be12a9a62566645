#pragma once

#include <string>

#include "caplp/audit.hpp"
#include "caplp/rotsym.hpp"
#include "caplp/solver.hpp"
#include "caplp_cli/config.hpp"

#include "json.hpp"

namespace caplp::cli {

/// Process exit codes.
enum Exit : int { ok = 0, bad_input = 1, stalled = 2, audit_failed = 3 };

nlohmann::json to_json(const SolveReport& r, bool timing = false);
nlohmann::json to_json(const AuditReport& r);
nlohmann::json to_json(const StructuralReport& r);
nlohmann::json to_json(const BarrierReport& r);
nlohmann::json to_json(const RunConfig& cfg);

/// Writes solution.csv, report.json and, for convex solutions, embedding.csv.
int cmd_solve(const RunConfig& cfg);
/// Re-evaluates residuals and audits of cfg.solution_file against the configured phi.
int cmd_verify(const RunConfig& cfg);
/// 1-D oracle; writes profile.csv and oracle.json, plus the 2-D gap when cfg.solution_file is set.
int cmd_oracle(const RunConfig& cfg);
/// Independent solves over sweep.p x sweep.theta in per-member directories.
int cmd_sweep(const RunConfig& cfg);
/// Quick internal consistency checks (seeded).
int cmd_selftest(const RunConfig& cfg);

}  // namespace caplp::cli
