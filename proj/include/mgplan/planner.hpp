#pragma once

// End-to-end planning run: build, find a starting incumbent, solve, extract.

#include "mgplan/builder.hpp"
#include "mgplan/solver.hpp"

#include <optional>
#include <vector>

namespace mgplan {

struct PlanOptions {
    ControlMode mode = ControlMode::surrogate;
    bool startup_binary = false;
    solver::SolveOptions solve;
    /// Build a rounded incumbent from the LP relaxation before branching.
    bool rounding_start = true;
    /// A plan of the same problem (possibly another budget or mode) offered
    /// as a start when it is feasible for this model.
    const PlanSolution* warm = nullptr;
};

struct PlanRun {
    BuiltModel built;
    solver::SolveOutcome outcome;
    std::optional<PlanSolution> solution;
    /// Objective of the start handed to the solver, when one was feasible.
    std::optional<double> start_objective;
};

PlanRun run_plan(const PlanningProblem& problem, const PlanOptions& options = {});

/// Signed HVAC decision per interval for one house-day: +1 heat, -1 cool, 0 off.
/// Sigma-delta rounding of `target` (fractional heat minus cool), overridden
/// whenever the forward simulation would leave [lower, upper] on T_in.
std::vector<int> round_hvac_schedule(const ThermalModel& model, const RepresentativeDay& day,
                                     const ThermalState& initial, const std::vector<double>& target,
                                     const std::vector<double>& lower, const std::vector<double>& upper);

/// Surrogate-mode start: round the LP relaxation's HVAC columns house by
/// house, fix them, and solve the remaining MILP. Empty when any step fails.
std::optional<std::vector<double>> rounding_start(const BuiltModel& built, const PlanningProblem& problem,
                                                  const solver::SolveOptions& options);

}  // namespace mgplan
