#pragma once

#include "mgplan/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace mgplan {

enum class ControlMode { surrogate, simple };

const char* to_string(ControlMode mode);
ControlMode parse_control_mode(const std::string& text);

/// Annualized cost components. Everything but `investment` is operation cost.
struct CostBreakdown {
    double investment = 0.0;
    double fuel = 0.0;
    double no_load = 0.0;
    double startup = 0.0;
    double energy = 0.0;  // PCC purchases minus sales
    double degradation = 0.0;
    double discomfort = 0.0;
    double shedding = 0.0;
    double demand_charge = 0.0;

    double operation() const
    {
        return fuel + no_load + startup + energy + degradation + discomfort + shedding + demand_charge;
    }
    double total() const { return investment + operation(); }
};

struct DfgTrace {
    int unit = 0;  // index into PlanSolution::units
    DaySeries power;
    DaySeries commit;
    DaySeries startup;
    std::vector<DaySeries> blocks;  // [block][day][t]
};

struct EssTrace {
    int unit = 0;
    DaySeries charge;
    DaySeries discharge;
    DaySeries soc;  // stored energy at the end of interval t
};

struct ResTrace {
    int unit = 0;
    DaySeries power;
};

/// Temperatures are states at the END of each interval (after that
/// interval's HVAC input has acted).
struct HouseTrace {
    DaySeries heat_on;
    DaySeries cool_on;
    DaySeries t_in;
    DaySeries t_mass;
    DaySeries t_env;
    DaySeries shed;
    DaySeries slack_below;  // s1
    DaySeries slack_above;  // s2
};

struct SimultaneousEss {
    int unit = 0;
    int day = 0;
    int interval = 0;
};

struct PlanSolution {
    ControlMode mode = ControlMode::surrogate;
    std::vector<InstallUnit> units;
    std::vector<bool> installed;  // per unit
    std::vector<DfgTrace> dfg;
    std::vector<EssTrace> ess;
    std::vector<ResTrace> res;
    std::vector<HouseTrace> houses;
    DaySeries pcc;
    std::map<int, double> peaks;  // month group -> kW
    CostBreakdown costs;
    double objective = 0.0;
    std::vector<SimultaneousEss> simultaneous_ess;

    int installed_count() const;
    int installed_count(UnitClass unit_class) const;
    /// Electrical HVAC demand of all houses, [day][t] kW.
    DaySeries total_hvac_kw(const PlanningProblem& problem) const;
    /// Community demand seen by the balance: HVAC + non-HVAC - shed.
    DaySeries total_load_kw(const PlanningProblem& problem) const;
};

}  // namespace mgplan
