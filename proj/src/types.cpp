#include "mgplan/types.hpp"

#include <cmath>

namespace mgplan {

bool ThermalModel::operator==(const ThermalModel& other) const
{
    return a_matrix == other.a_matrix && b_matrix == other.b_matrix &&
           dt_hours == other.dt_hours &&
           hvac_rated_power_kw == other.hvac_rated_power_kw && cop == other.cop &&
           desired_temp_c == other.desired_temp_c &&
           band_halfwidth_c == other.band_halfwidth_c &&
           discomfort_cost_per_degc == other.discomfort_cost_per_degc;
}

std::vector<InstallUnit> expand_units(const PlanningProblem& problem)
{
    std::vector<InstallUnit> units;
    auto push = [&](UnitClass cls, int index, const std::string& name, int count) {
        for (int k = 0; k < count; ++k) {
            units.push_back({cls, index, k, name + "#" + std::to_string(k)});
        }
    };
    for (int i = 0; i < static_cast<int>(problem.res.size()); ++i) {
        const auto& c = problem.res[i];
        push(c.kind == ResKind::wind ? UnitClass::wind : UnitClass::pv, i, c.name, c.count_limit);
    }
    for (int i = 0; i < static_cast<int>(problem.dfg.size()); ++i) {
        push(UnitClass::dfg, i, problem.dfg[i].name, problem.dfg[i].count_limit);
    }
    for (int i = 0; i < static_cast<int>(problem.ess.size()); ++i) {
        push(UnitClass::ess, i, problem.ess[i].name, problem.ess[i].count_limit);
    }
    return units;
}

double annuity_factor(double rate, double lifetime_years)
{
    if (!(lifetime_years >= 1.0)) {
        throw InvalidArgument("annuity_factor: lifetime must be at least one year");
    }
    if (!(rate >= 0.0)) {
        throw InvalidArgument("annuity_factor: interest rate must be non-negative");
    }
    if (rate == 0.0) {
        return 1.0 / lifetime_years;
    }
    const double growth = std::pow(1.0 + rate, lifetime_years);
    return rate * growth / (growth - 1.0);
}

double annualized_investment(const PlanningProblem& problem, const InstallUnit& unit)
{
    switch (unit.unit_class) {
    case UnitClass::wind: {
        const auto& c = problem.res[unit.catalog_index];
        const auto& f = problem.wind_finance;
        return annuity_factor(f.interest_rate, f.lifetime_years) * c.capital_cost_per_kw * c.p_max_kw;
    }
    case UnitClass::pv: {
        const auto& c = problem.res[unit.catalog_index];
        const auto& f = problem.pv_finance;
        return annuity_factor(f.interest_rate, f.lifetime_years) * c.capital_cost_per_kw * c.p_max_kw;
    }
    case UnitClass::dfg: {
        const auto& c = problem.dfg[unit.catalog_index];
        const auto& f = problem.dfg_finance;
        return annuity_factor(f.interest_rate, f.lifetime_years) * c.capital_cost_per_kw * c.p_max_kw;
    }
    case UnitClass::ess: {
        const auto& c = problem.ess[unit.catalog_index];
        const auto& f = problem.ess_finance;
        return annuity_factor(f.interest_rate, f.lifetime_years) *
               (c.power_cost_per_kw * c.p_max_kw + c.energy_cost_per_kwh * c.e_max_kwh);
    }
    }
    return 0.0;
}

const char* to_string(ResKind kind)
{
    return kind == ResKind::wind ? "wind" : "pv";
}

const char* to_string(UnitClass unit_class)
{
    switch (unit_class) {
    case UnitClass::wind: return "wind";
    case UnitClass::pv: return "pv";
    case UnitClass::dfg: return "dfg";
    case UnitClass::ess: return "ess";
    }
    return "?";
}

ThermalState initial_state_for(const PlanningProblem& problem, int house, int day)
{
    if (problem.initial_state) {
        return *problem.initial_state;
    }
    return ThermalState::uniform(problem.houses[house].thermal.desired_temp_c[day][0]);
}

}  // namespace mgplan
