#pragma once

// Batch commands behind the mgplan executable. Each command loads a
// scenario, runs one or more planning solves and writes a JSON report plus
// CSV data files into the output directory.
//
// Files written per case <name>:
//   <name>_report.json        schema "mgplan-report/1"
//   <name>_dispatch.csv       day,interval,entity,quantity,value
//   <name>_installations.csv  unit,class,catalog_entry,copy,installed,capital_cost,annualized_cost
//   <name>_hvac.csv           day,interval,price_per_kwh,ambient_c,house,heat_on,cool_on,t_in_c,t_desired_c
//   <name>_sources.csv        day,interval,load_kw,pcc_kw,res_kw,dfg_kw,ess_net_kw
//   <name>_soc.csv            day,interval,unit,soc_kwh
// compare adds compare_costs.csv and compare_total_load.csv; sweep adds
// sweep.csv. Wall-clock times go to timing.csv so reports stay reproducible.

#include "mgplan/planner.hpp"
#include "mgplan/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mgplan::cli {

inline constexpr const char* kReportSchema = "mgplan-report/1";
/// --scenario value that synthesizes the bundled study in memory from --seed.
inline constexpr const char* kDefaultScenario = "default";

struct CommandOptions {
    std::string scenario = kDefaultScenario;
    std::optional<double> budget;  // overrides the scenario budget
    ControlMode mode = ControlMode::surrogate;
    double rel_gap = solver::kDefaultRelGap;
    double time_limit_s = 0.0;  // 0 = none
    int jobs = 1;
    std::uint64_t seed = 1;
    std::filesystem::path out = "mgplan-out";
    std::vector<double> budgets;  // sweep only
};

struct CaseResult {
    std::string name;
    double budget = 0.0;
    ControlMode mode = ControlMode::surrogate;
    PlanRun run;
    std::filesystem::path report_path;
};

struct CommandResult {
    std::vector<CaseResult> cases;
    std::vector<std::filesystem::path> files;
    int exit_code = 0;  // 0 iff every case ended optimal or feasible-gap
};

/// Loaded problem plus the digest of the files it came from.
struct LoadedScenario {
    PlanningProblem problem;
    std::string digest;
};

LoadedScenario load(const CommandOptions& options);

CommandResult cmd_solve(const CommandOptions& options);
CommandResult cmd_compare_control(const CommandOptions& options);
CommandResult cmd_sweep_budget(const CommandOptions& options);
/// Write the synthesized default scenario to options.out.
void cmd_synthesize(const CommandOptions& options);

/// Entry point used by the executable; returns the process exit code.
int run(int argc, char** argv);

}  // namespace mgplan::cli
