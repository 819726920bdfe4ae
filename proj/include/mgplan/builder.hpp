#pragma once

// PlanningProblem -> MilpModel translation.
//
// Column layout per (day d, interval t):
//   dfg unit:   P, P_l (one per block), alpha (binary), beta ([0,1] or binary)
//   ess unit:   P_charge, P_discharge, SOC (end of interval)
//   res unit:   P
//   house:      u_heat, u_cool (binary), shed, T_in, T_mass, T_env (end of
//               interval), s1, s2          -- surrogate mode
//               shed only                  -- simple mode (HVAC fixed)
//   community:  P_pcc
// plus one install binary per unit and one peak column per month group.

#include "mgplan/milp.hpp"
#include "mgplan/solution.hpp"
#include "mgplan/thermal.hpp"
#include "mgplan/types.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace mgplan {

/// Price-blind thermostat runs, [house][day].
struct ControlSchedules {
    std::vector<std::vector<thermal::SimulationResult>> runs;
};

/// Hysteresis runs for every house and day, mode chosen by season.
ControlSchedules simulate_simple_schedules(const PlanningProblem& problem);

struct BuildOptions {
    ControlMode mode = ControlMode::surrogate;
    /// Required in simple mode.
    const ControlSchedules* schedules = nullptr;
    /// Model the DFG startup indicator as binary instead of continuous [0,1].
    bool startup_binary = false;
};

class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ExtractionIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BuiltModel {
    MilpModel model;
    VariableIndex index;
    std::vector<InstallUnit> units;
    ControlMode mode = ControlMode::surrogate;
    ControlSchedules schedules;  // populated in simple mode
    bool startup_binary = false;
};

/// Incremental builder; build() runs every step in order. The constructor
/// declares all columns, the add_* steps attach objective terms and rows.
class PlanModelBuilder {
public:
    PlanModelBuilder(const PlanningProblem& problem, BuildOptions options);

    /// Annualized capital terms on the install binaries and the budget row.
    void add_investment_cost();
    /// Day-weighted fuel, no-load, startup, PCC energy, degradation,
    /// discomfort and shedding terms plus the peak demand charge.
    void add_operation_cost();
    void add_dfg_constraints();
    void add_ess_constraints();
    void add_res_constraints();
    /// Surrogate mode only: dynamics rows, heat/cool exclusion, |T_in - T_d| slacks.
    void add_thermal_comfort_constraints();
    void add_balance_and_grid_constraints();

    BuiltModel finish();

    const MilpModel& model() const { return built_.model; }
    const VariableIndex& index() const { return built_.index; }

private:
    int add(const VarKey& key, VarKind kind, double lower, double upper);
    int col(Family f, int entity, int day = -1, int interval = -1, int sub = -1) const;
    double day_weight(int day) const;
    double fixed_hvac_kw(int house, int day, int t) const;

    const PlanningProblem& problem_;
    BuildOptions options_;
    BuiltModel built_;
    std::vector<int> dfg_units_;  // unit ids by class, in unit order
    std::vector<int> ess_units_;
    std::vector<int> res_units_;
};

/// Validate, then run every builder step. Throws BuildError on invalid input.
BuiltModel build(const PlanningProblem& problem, const BuildOptions& options);

/// Closed-form size of a built model.
struct ModelSize {
    long variables = 0;
    long binaries = 0;
};
ModelSize expected_model_size(const PlanningProblem& problem, ControlMode mode, bool startup_binary = false);

/// Read a solved column vector back into domain form and recompute every
/// cost component from parameters and dispatch. Throws
/// ExtractionIntegrityError when the recomputed total and `solver_objective`
/// differ by more than rel_tol * max(1, |solver_objective|).
PlanSolution extract_solution(std::span<const double> values, const BuiltModel& built,
                              const PlanningProblem& problem, double solver_objective,
                              double rel_tol = 1e-6);

/// Recompute the cost breakdown of a solution from first principles.
CostBreakdown recompute_costs(const PlanSolution& solution, const PlanningProblem& problem);

/// Map a domain solution onto the columns of another built model of the
/// same problem (e.g. a simple-mode plan as a surrogate-mode start).
std::vector<double> solution_to_columns(const PlanSolution& solution, const BuiltModel& built,
                                        const PlanningProblem& problem);

}  // namespace mgplan
