#include "mgplan/builder.hpp"

#include "mgplan/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace mgplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::set<int> month_groups(const PlanningProblem& p)
{
    std::set<int> groups;
    for (const auto& d : p.days) {
        groups.insert(d.month_group);
    }
    return groups;
}

double demand_charge_of(const PlanningProblem& p, int group)
{
    for (const auto& d : p.days) {
        if (d.month_group == group) {
            return d.demand_charge_per_kw;
        }
    }
    return 0.0;
}

DaySeries zeros_like(const PlanningProblem& p)
{
    DaySeries s;
    for (const auto& d : p.days) {
        s.emplace_back(d.interval_count, 0.0);
    }
    return s;
}

}  // namespace

const char* to_string(ControlMode mode)
{
    return mode == ControlMode::surrogate ? "surrogate" : "simple";
}

ControlMode parse_control_mode(const std::string& text)
{
    if (text == "surrogate") {
        return ControlMode::surrogate;
    }
    if (text == "simple") {
        return ControlMode::simple;
    }
    throw InvalidArgument("unknown control mode '" + text + "' (expected surrogate|simple)");
}

ControlSchedules simulate_simple_schedules(const PlanningProblem& problem)
{
    ControlSchedules s;
    s.runs.resize(problem.houses.size());
    for (std::size_t h = 0; h < problem.houses.size(); ++h) {
        const auto& th = problem.houses[h].thermal;
        for (std::size_t d = 0; d < problem.days.size(); ++d) {
            const auto& day = problem.days[d];
            const auto mode = thermal::season_mode(day, th.desired_temp_c[d]);
            s.runs[h].push_back(thermal::simulate_simple_control(
                th, day, static_cast<int>(d), initial_state_for(problem, static_cast<int>(h), static_cast<int>(d)),
                mode));
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// PlanModelBuilder

PlanModelBuilder::PlanModelBuilder(const PlanningProblem& problem, BuildOptions options)
    : problem_(problem), options_(options)
{
    built_.mode = options.mode;
    built_.startup_binary = options.startup_binary;
    built_.units = expand_units(problem);

    const bool surrogate = options.mode == ControlMode::surrogate;
    if (!surrogate) {
        if (options.schedules == nullptr) {
            throw BuildError("simple mode requires HVAC schedules");
        }
        const auto& runs = options.schedules->runs;
        bool ok = runs.size() == problem.houses.size();
        for (std::size_t h = 0; ok && h < runs.size(); ++h) {
            ok = runs[h].size() == problem.days.size();
            for (std::size_t d = 0; ok && d < runs[h].size(); ++d) {
                ok = static_cast<int>(runs[h][d].on.size()) == problem.days[d].interval_count &&
                     runs[h][d].states.size() == runs[h][d].on.size() + 1;
            }
        }
        if (!ok) {
            throw BuildError("HVAC schedules do not match the problem's houses, days and intervals");
        }
        built_.schedules = *options.schedules;
    }

    for (int u = 0; u < static_cast<int>(built_.units.size()); ++u) {
        add({Family::install, u}, VarKind::binary, 0.0, 1.0);
        switch (built_.units[u].unit_class) {
        case UnitClass::dfg: dfg_units_.push_back(u); break;
        case UnitClass::ess: ess_units_.push_back(u); break;
        default: res_units_.push_back(u); break;
        }
    }

    for (int d = 0; d < static_cast<int>(problem.days.size()); ++d) {
        const auto& day = problem.days[d];
        for (int t = 0; t < day.interval_count; ++t) {
            for (int u : res_units_) {
                const auto& c = problem.res[built_.units[u].catalog_index];
                add({Family::res_power, u, d, t}, VarKind::continuous, 0.0,
                    c.p_max_kw * c.capacity_factor[d][t]);
            }
            for (int u : dfg_units_) {
                const auto& g = problem.dfg[built_.units[u].catalog_index];
                add({Family::dfg_power, u, d, t}, VarKind::continuous, 0.0, g.p_max_kw);
                for (int l = 0; l < static_cast<int>(g.blocks.size()); ++l) {
                    add({Family::dfg_block, u, d, t, l}, VarKind::continuous, 0.0, g.blocks[l].width_kw);
                }
                add({Family::dfg_commit, u, d, t}, VarKind::binary, 0.0, 1.0);
                add({Family::dfg_startup, u, d, t},
                    options.startup_binary ? VarKind::binary : VarKind::continuous, 0.0, 1.0);
            }
            for (int u : ess_units_) {
                const auto& e = problem.ess[built_.units[u].catalog_index];
                add({Family::ess_charge, u, d, t}, VarKind::continuous, 0.0, e.p_max_kw);
                add({Family::ess_discharge, u, d, t}, VarKind::continuous, 0.0, e.p_max_kw);
                add({Family::ess_soc, u, d, t}, VarKind::continuous, 0.0, e.soc_max_frac * e.e_max_kwh);
            }
            for (int h = 0; h < static_cast<int>(problem.houses.size()); ++h) {
                const auto& house = problem.houses[h];
                if (surrogate) {
                    add({Family::hvac_heat, h, d, t}, VarKind::binary, 0.0, 1.0);
                    add({Family::hvac_cool, h, d, t}, VarKind::binary, 0.0, 1.0);
                }
                add({Family::shed, h, d, t}, VarKind::continuous, 0.0, house.max_shed_kw[d][t]);
                if (surrogate) {
                    const double td = house.thermal.desired_temp_c[d][t];
                    const double band = house.thermal.band_halfwidth_c[d][t];
                    add({Family::temp_indoor, h, d, t}, VarKind::continuous, td - band, td + band);
                    add({Family::temp_mass, h, d, t}, VarKind::continuous, -kInf, kInf);
                    add({Family::temp_envelope, h, d, t}, VarKind::continuous, -kInf, kInf);
                    add({Family::slack_below, h, d, t}, VarKind::continuous, 0.0, kInf);
                    add({Family::slack_above, h, d, t}, VarKind::continuous, 0.0, kInf);
                }
            }
            add({Family::pcc, -1, d, t}, VarKind::continuous, -problem.pcc_limit_kw, problem.pcc_limit_kw);
        }
    }
    for (int m : month_groups(problem)) {
        add({Family::peak, m}, VarKind::continuous, 0.0, kInf);
    }

    const auto& vars = built_.model.variables();
    for (int i = 0; i < static_cast<int>(vars.size()); ++i) {
        if (vars[i].lower > vars[i].upper) {
            throw BuildError("infeasible bounds on " + to_string(built_.index.key(i)));
        }
    }
}

int PlanModelBuilder::add(const VarKey& key, VarKind kind, double lower, double upper)
{
    const int id = built_.model.add_variable(kind, lower, upper);
    built_.index.insert(key, id);
    return id;
}

int PlanModelBuilder::col(Family f, int entity, int day, int interval, int sub) const
{
    return built_.index.at({f, entity, day, interval, sub});
}

double PlanModelBuilder::day_weight(int day) const
{
    return problem_.pi1 * problem_.days[day].weight_days;
}

double PlanModelBuilder::fixed_hvac_kw(int house, int day, int t) const
{
    const auto& run = built_.schedules.runs[house][day];
    return run.on[t] != 0 ? problem_.houses[house].thermal.hvac_rated_power_kw : 0.0;
}

void PlanModelBuilder::add_investment_cost()
{
    std::vector<Term> budget;
    for (int u = 0; u < static_cast<int>(built_.units.size()); ++u) {
        const double cost = annualized_investment(problem_, built_.units[u]);
        const int id = col(Family::install, u);
        built_.model.add_objective(id, cost);
        budget.push_back({id, cost});
    }
    built_.model.add_constraint(std::move(budget), RowSense::less_equal, problem_.budget, "budget");
}

void PlanModelBuilder::add_operation_cost()
{
    auto& m = built_.model;
    const bool surrogate = built_.mode == ControlMode::surrogate;
    for (int d = 0; d < static_cast<int>(problem_.days.size()); ++d) {
        const auto& day = problem_.days[d];
        const double w = day_weight(d);
        const double dt = day.dt_hours;
        for (int t = 0; t < day.interval_count; ++t) {
            for (int u : dfg_units_) {
                const auto& g = problem_.dfg[built_.units[u].catalog_index];
                for (int l = 0; l < static_cast<int>(g.blocks.size()); ++l) {
                    m.add_objective(col(Family::dfg_block, u, d, t, l), w * dt * g.blocks[l].marginal_cost_per_kwh);
                }
                m.add_objective(col(Family::dfg_commit, u, d, t), w * dt * g.no_load_cost_per_h);
                m.add_objective(col(Family::dfg_startup, u, d, t), w * g.startup_cost);
            }
            m.add_objective(col(Family::pcc, -1, d, t), w * dt * day.pcc_price_per_kwh[t]);
            for (int u : ess_units_) {
                const auto& e = problem_.ess[built_.units[u].catalog_index];
                m.add_objective(col(Family::ess_charge, u, d, t), w * dt * e.degradation_cost_per_kwh);
                m.add_objective(col(Family::ess_discharge, u, d, t), w * dt * e.degradation_cost_per_kwh);
            }
            for (int h = 0; h < static_cast<int>(problem_.houses.size()); ++h) {
                const auto& house = problem_.houses[h];
                m.add_objective(col(Family::shed, h, d, t), w * dt * house.shed_penalty_per_kwh);
                const double wd = w * house.thermal.discomfort_cost_per_degc;
                if (surrogate) {
                    m.add_objective(col(Family::slack_below, h, d, t), wd);
                    m.add_objective(col(Family::slack_above, h, d, t), wd);
                } else {
                    const double tin = built_.schedules.runs[h][d].states[t + 1].t_in_c;
                    m.add_objective_offset(wd * std::abs(tin - house.thermal.desired_temp_c[d][t]));
                }
            }
        }
    }
    for (int g : month_groups(problem_)) {
        m.add_objective(col(Family::peak, g), problem_.pi2 * demand_charge_of(problem_, g));
    }
}

void PlanModelBuilder::add_dfg_constraints()
{
    auto& m = built_.model;
    for (int u : dfg_units_) {
        const auto& g = problem_.dfg[built_.units[u].catalog_index];
        const int install = col(Family::install, u);
        for (int d = 0; d < static_cast<int>(problem_.days.size()); ++d) {
            for (int t = 0; t < problem_.days[d].interval_count; ++t) {
                const int p = col(Family::dfg_power, u, d, t);
                const int alpha = col(Family::dfg_commit, u, d, t);
                const int beta = col(Family::dfg_startup, u, d, t);

                std::vector<Term> output{{p, 1.0}, {alpha, -g.p_min_kw}};
                for (int l = 0; l < static_cast<int>(g.blocks.size()); ++l) {
                    output.push_back({col(Family::dfg_block, u, d, t, l), -1.0});
                }
                m.add_constraint(std::move(output), RowSense::equal, 0.0, "dfg-output");
                m.add_constraint({{p, 1.0}, {alpha, -g.p_max_kw}}, RowSense::less_equal, 0.0, "dfg-output-limit");

                // Cold start every representative day: alpha[-1] = 0.
                std::vector<Term> startup{{beta, 1.0}, {alpha, -1.0}};
                if (t > 0) {
                    startup.push_back({col(Family::dfg_commit, u, d, t - 1), 1.0});
                }
                m.add_constraint(std::move(startup), RowSense::greater_equal, 0.0, "dfg-startup");
                m.add_constraint({{alpha, 1.0}, {install, -1.0}}, RowSense::less_equal, 0.0, "dfg-installed");
            }
        }
    }
}

void PlanModelBuilder::add_ess_constraints()
{
    auto& m = built_.model;
    for (int u : ess_units_) {
        const auto& e = problem_.ess[built_.units[u].catalog_index];
        const int install = col(Family::install, u);
        const double soc0 = e.cyclic_soc_kwh();
        for (int d = 0; d < static_cast<int>(problem_.days.size()); ++d) {
            const auto& day = problem_.days[d];
            const double dt = day.dt_hours;
            for (int t = 0; t < day.interval_count; ++t) {
                const int pc = col(Family::ess_charge, u, d, t);
                const int pd = col(Family::ess_discharge, u, d, t);
                const int soc = col(Family::ess_soc, u, d, t);
                m.add_constraint({{pc, 1.0}, {install, -e.p_max_kw}}, RowSense::less_equal, 0.0, "ess-charge-limit");
                m.add_constraint({{pd, 1.0}, {install, -e.p_max_kw}}, RowSense::less_equal, 0.0,
                                 "ess-discharge-limit");
                m.add_constraint({{soc, 1.0}, {install, -e.soc_min_frac * e.e_max_kwh}}, RowSense::greater_equal,
                                 0.0, "ess-soc-min");
                m.add_constraint({{soc, 1.0}, {install, -e.soc_max_frac * e.e_max_kwh}}, RowSense::less_equal,
                                 0.0, "ess-soc-max");

                std::vector<Term> transition{{soc, 1.0}, {pc, -e.eta_charge * dt}, {pd, dt / e.eta_discharge}};
                if (t > 0) {
                    transition.push_back({col(Family::ess_soc, u, d, t - 1), -1.0});
                } else {
                    transition.push_back({install, -soc0});
                }
                m.add_constraint(std::move(transition), RowSense::equal, 0.0, "ess-soc-transition");
            }
            m.add_constraint({{col(Family::ess_soc, u, d, day.interval_count - 1), 1.0}, {install, -soc0}},
                             RowSense::equal, 0.0, "ess-soc-cyclic");
        }
    }
}

void PlanModelBuilder::add_res_constraints()
{
    auto& m = built_.model;
    for (int u : res_units_) {
        const auto& c = problem_.res[built_.units[u].catalog_index];
        const int install = col(Family::install, u);
        for (int d = 0; d < static_cast<int>(problem_.days.size()); ++d) {
            for (int t = 0; t < problem_.days[d].interval_count; ++t) {
                m.add_constraint({{col(Family::res_power, u, d, t), 1.0},
                                  {install, -c.p_max_kw * c.capacity_factor[d][t]}},
                                 RowSense::less_equal, 0.0, "res-available");
            }
        }
    }
}

void PlanModelBuilder::add_thermal_comfort_constraints()
{
    if (built_.mode != ControlMode::surrogate) {
        return;
    }
    auto& m = built_.model;
    constexpr Family kStates[3] = {Family::temp_indoor, Family::temp_mass, Family::temp_envelope};
    for (int h = 0; h < static_cast<int>(problem_.houses.size()); ++h) {
        const auto& th = problem_.houses[h].thermal;
        const Matrix3& a = th.a_matrix;
        const Matrix3& b = th.b_matrix;
        const double q = th.hvac_thermal_kw();
        for (int d = 0; d < static_cast<int>(problem_.days.size()); ++d) {
            const auto& day = problem_.days[d];
            const Vector3 x0 = initial_state_for(problem_, h, d).vec();
            for (int t = 0; t < day.interval_count; ++t) {
                const int heat = col(Family::hvac_heat, h, d, t);
                const int cool = col(Family::hvac_cool, h, d, t);
                for (int i = 0; i < 3; ++i) {
                    // x_i[t] - sum_j A_ij x_j[t-1] - B_i2 q (u_heat - u_cool) = B_i0 T_a + B_i1 Phi
                    double rhs = b(i, 0) * day.ambient_temp_c[t] + b(i, 1) * day.irradiance_wm2[t];
                    std::vector<Term> row{{col(kStates[i], h, d, t), 1.0}};
                    for (int j = 0; j < 3; ++j) {
                        if (a(i, j) == 0.0) {
                            continue;
                        }
                        if (t > 0) {
                            row.push_back({col(kStates[j], h, d, t - 1), -a(i, j)});
                        } else {
                            rhs += a(i, j) * x0(j);
                        }
                    }
                    if (b(i, 2) != 0.0) {
                        row.push_back({heat, -b(i, 2) * q});
                        row.push_back({cool, b(i, 2) * q});
                    }
                    m.add_constraint(std::move(row), RowSense::equal, rhs, "thermal-dynamics");
                }
                m.add_constraint({{heat, 1.0}, {cool, 1.0}}, RowSense::less_equal, 1.0, "hvac-exclusive");
                m.add_constraint({{col(Family::temp_indoor, h, d, t), 1.0},
                                  {col(Family::slack_below, h, d, t), 1.0},
                                  {col(Family::slack_above, h, d, t), -1.0}},
                                 RowSense::equal, th.desired_temp_c[d][t], "comfort-deviation");
            }
        }
    }
}

void PlanModelBuilder::add_balance_and_grid_constraints()
{
    auto& m = built_.model;
    const bool surrogate = built_.mode == ControlMode::surrogate;
    for (int d = 0; d < static_cast<int>(problem_.days.size()); ++d) {
        const auto& day = problem_.days[d];
        const int peak = col(Family::peak, day.month_group);
        for (int t = 0; t < day.interval_count; ++t) {
            // supply - HVAC demand + shed = non-HVAC demand
            std::vector<Term> row;
            double rhs = 0.0;
            for (int u : res_units_) {
                row.push_back({col(Family::res_power, u, d, t), 1.0});
            }
            for (int u : dfg_units_) {
                row.push_back({col(Family::dfg_power, u, d, t), 1.0});
            }
            for (int u : ess_units_) {
                row.push_back({col(Family::ess_discharge, u, d, t), 1.0});
                row.push_back({col(Family::ess_charge, u, d, t), -1.0});
            }
            const int pcc = col(Family::pcc, -1, d, t);
            row.push_back({pcc, 1.0});
            for (int h = 0; h < static_cast<int>(problem_.houses.size()); ++h) {
                const auto& house = problem_.houses[h];
                row.push_back({col(Family::shed, h, d, t), 1.0});
                rhs += house.non_hvac_load_kw[d][t];
                if (surrogate) {
                    const double rated = house.thermal.hvac_rated_power_kw;
                    row.push_back({col(Family::hvac_heat, h, d, t), -rated});
                    row.push_back({col(Family::hvac_cool, h, d, t), -rated});
                } else {
                    rhs += fixed_hvac_kw(h, d, t);
                }
            }
            m.add_constraint(std::move(row), RowSense::equal, rhs, "power-balance");
            m.add_constraint({{peak, 1.0}, {pcc, -1.0}}, RowSense::greater_equal, 0.0, "monthly-peak");
        }
    }
}

BuiltModel PlanModelBuilder::finish()
{
    built_.model.check_invariants();
    return std::move(built_);
}

BuiltModel build(const PlanningProblem& problem, const BuildOptions& options)
{
    const auto violations = validate_problem(problem);
    if (!violations.empty()) {
        throw BuildError("problem failed validation:\n" + describe(violations));
    }
    PlanModelBuilder b(problem, options);
    b.add_investment_cost();
    b.add_operation_cost();
    b.add_dfg_constraints();
    b.add_ess_constraints();
    b.add_res_constraints();
    b.add_thermal_comfort_constraints();
    b.add_balance_and_grid_constraints();
    return b.finish();
}

ModelSize expected_model_size(const PlanningProblem& problem, ControlMode mode, bool startup_binary)
{
    long units = 0;
    long res_units = 0;
    long dfg_units = 0;
    long dfg_cols = 0;  // per interval
    long ess_units = 0;
    for (const auto& r : problem.res) {
        res_units += r.count_limit;
    }
    for (const auto& g : problem.dfg) {
        dfg_units += g.count_limit;
        dfg_cols += static_cast<long>(g.count_limit) * (3 + static_cast<long>(g.blocks.size()));
    }
    for (const auto& e : problem.ess) {
        ess_units += e.count_limit;
    }
    units = res_units + dfg_units + ess_units;
    long intervals = 0;
    for (const auto& d : problem.days) {
        intervals += d.interval_count;
    }
    const long houses = static_cast<long>(problem.houses.size());
    const bool surrogate = mode == ControlMode::surrogate;
    const long per_house = surrogate ? 8 : 1;

    ModelSize s;
    s.variables = units + intervals * (res_units + dfg_cols + 3 * ess_units + houses * per_house + 1) +
                  static_cast<long>(month_groups(problem).size());
    s.binaries = units + dfg_units * intervals * (startup_binary ? 2 : 1) + (surrogate ? houses * intervals * 2 : 0);
    return s;
}

// ---------------------------------------------------------------------------
// Extraction

int PlanSolution::installed_count() const
{
    return static_cast<int>(std::count(installed.begin(), installed.end(), true));
}

int PlanSolution::installed_count(UnitClass unit_class) const
{
    int n = 0;
    for (std::size_t u = 0; u < units.size(); ++u) {
        n += (installed[u] && units[u].unit_class == unit_class) ? 1 : 0;
    }
    return n;
}

DaySeries PlanSolution::total_hvac_kw(const PlanningProblem& problem) const
{
    DaySeries out = zeros_like(problem);
    for (std::size_t h = 0; h < houses.size(); ++h) {
        const double rated = problem.houses[h].thermal.hvac_rated_power_kw;
        for (std::size_t d = 0; d < out.size(); ++d) {
            for (std::size_t t = 0; t < out[d].size(); ++t) {
                out[d][t] += rated * (houses[h].heat_on[d][t] + houses[h].cool_on[d][t]);
            }
        }
    }
    return out;
}

DaySeries PlanSolution::total_load_kw(const PlanningProblem& problem) const
{
    DaySeries out = total_hvac_kw(problem);
    for (std::size_t h = 0; h < houses.size(); ++h) {
        for (std::size_t d = 0; d < out.size(); ++d) {
            for (std::size_t t = 0; t < out[d].size(); ++t) {
                out[d][t] += problem.houses[h].non_hvac_load_kw[d][t] - houses[h].shed[d][t];
            }
        }
    }
    return out;
}

PlanSolution extract_solution(std::span<const double> values, const BuiltModel& built,
                              const PlanningProblem& problem, double solver_objective, double rel_tol)
{
    if (static_cast<int>(values.size()) != built.model.variable_count()) {
        throw ExtractionIntegrityError("value vector length does not match the model");
    }
    const auto& idx = built.index;
    const auto value = [&](Family f, int e, int d = -1, int t = -1, int l = -1) {
        return values[idx.at({f, e, d, t, l})];
    };
    const bool surrogate = built.mode == ControlMode::surrogate;

    PlanSolution s;
    s.mode = built.mode;
    s.units = built.units;
    s.objective = solver_objective;
    for (int u = 0; u < static_cast<int>(built.units.size()); ++u) {
        s.installed.push_back(value(Family::install, u) > 0.5);
    }

    for (int u = 0; u < static_cast<int>(built.units.size()); ++u) {
        const auto& unit = built.units[u];
        switch (unit.unit_class) {
        case UnitClass::dfg: {
            const auto& g = problem.dfg[unit.catalog_index];
            DfgTrace tr;
            tr.unit = u;
            tr.power = tr.commit = tr.startup = zeros_like(problem);
            tr.blocks.assign(g.blocks.size(), zeros_like(problem));
            for (std::size_t d = 0; d < problem.days.size(); ++d) {
                for (int t = 0; t < problem.days[d].interval_count; ++t) {
                    const int di = static_cast<int>(d);
                    tr.power[d][t] = value(Family::dfg_power, u, di, t);
                    tr.commit[d][t] = value(Family::dfg_commit, u, di, t);
                    tr.startup[d][t] = value(Family::dfg_startup, u, di, t);
                    for (std::size_t l = 0; l < g.blocks.size(); ++l) {
                        tr.blocks[l][d][t] = value(Family::dfg_block, u, di, t, static_cast<int>(l));
                    }
                }
            }
            s.dfg.push_back(std::move(tr));
            break;
        }
        case UnitClass::ess: {
            EssTrace tr;
            tr.unit = u;
            tr.charge = tr.discharge = tr.soc = zeros_like(problem);
            for (std::size_t d = 0; d < problem.days.size(); ++d) {
                for (int t = 0; t < problem.days[d].interval_count; ++t) {
                    const int di = static_cast<int>(d);
                    tr.charge[d][t] = value(Family::ess_charge, u, di, t);
                    tr.discharge[d][t] = value(Family::ess_discharge, u, di, t);
                    tr.soc[d][t] = value(Family::ess_soc, u, di, t);
                    if (tr.charge[d][t] > 1e-6 && tr.discharge[d][t] > 1e-6) {
                        s.simultaneous_ess.push_back({u, di, t});
                    }
                }
            }
            s.ess.push_back(std::move(tr));
            break;
        }
        default: {
            ResTrace tr;
            tr.unit = u;
            tr.power = zeros_like(problem);
            for (std::size_t d = 0; d < problem.days.size(); ++d) {
                for (int t = 0; t < problem.days[d].interval_count; ++t) {
                    tr.power[d][t] = value(Family::res_power, u, static_cast<int>(d), t);
                }
            }
            s.res.push_back(std::move(tr));
            break;
        }
        }
    }

    for (int h = 0; h < static_cast<int>(problem.houses.size()); ++h) {
        const auto& th = problem.houses[h].thermal;
        HouseTrace tr;
        tr.heat_on = tr.cool_on = tr.t_in = tr.t_mass = tr.t_env = tr.shed = tr.slack_below = tr.slack_above =
            zeros_like(problem);
        for (int d = 0; d < static_cast<int>(problem.days.size()); ++d) {
            for (int t = 0; t < problem.days[d].interval_count; ++t) {
                tr.shed[d][t] = value(Family::shed, h, d, t);
                if (surrogate) {
                    tr.heat_on[d][t] = value(Family::hvac_heat, h, d, t);
                    tr.cool_on[d][t] = value(Family::hvac_cool, h, d, t);
                    tr.t_in[d][t] = value(Family::temp_indoor, h, d, t);
                    tr.t_mass[d][t] = value(Family::temp_mass, h, d, t);
                    tr.t_env[d][t] = value(Family::temp_envelope, h, d, t);
                    tr.slack_below[d][t] = value(Family::slack_below, h, d, t);
                    tr.slack_above[d][t] = value(Family::slack_above, h, d, t);
                } else {
                    const auto& run = built.schedules.runs[h][d];
                    const bool on = run.on[t] != 0;
                    tr.heat_on[d][t] = on && run.mode == thermal::HvacMode::heat ? 1.0 : 0.0;
                    tr.cool_on[d][t] = on && run.mode == thermal::HvacMode::cool ? 1.0 : 0.0;
                    const auto& x = run.states[t + 1];
                    tr.t_in[d][t] = x.t_in_c;
                    tr.t_mass[d][t] = x.t_mass_c;
                    tr.t_env[d][t] = x.t_env_c;
                    const double dev = x.t_in_c - th.desired_temp_c[d][t];
                    tr.slack_below[d][t] = std::max(0.0, -dev);
                    tr.slack_above[d][t] = std::max(0.0, dev);
                }
            }
        }
        s.houses.push_back(std::move(tr));
    }

    s.pcc = zeros_like(problem);
    for (int d = 0; d < static_cast<int>(problem.days.size()); ++d) {
        for (int t = 0; t < problem.days[d].interval_count; ++t) {
            s.pcc[d][t] = value(Family::pcc, -1, d, t);
        }
    }
    for (int g : month_groups(problem)) {
        s.peaks[g] = value(Family::peak, g);
    }

    s.costs = recompute_costs(s, problem);
    const double total = s.costs.total();
    if (std::abs(total - solver_objective) > rel_tol * std::max(1.0, std::abs(solver_objective))) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "extraction-integrity-error: recomputed total " << total << " vs solver objective "
            << solver_objective;
        throw ExtractionIntegrityError(msg.str());
    }
    return s;
}

CostBreakdown recompute_costs(const PlanSolution& s, const PlanningProblem& problem)
{
    CostBreakdown c;
    for (std::size_t u = 0; u < s.units.size(); ++u) {
        if (s.installed[u]) {
            c.investment += annualized_investment(problem, s.units[u]);
        }
    }
    for (std::size_t d = 0; d < problem.days.size(); ++d) {
        const auto& day = problem.days[d];
        const double w = problem.pi1 * day.weight_days;
        const double dt = day.dt_hours;
        for (int t = 0; t < day.interval_count; ++t) {
            for (const auto& tr : s.dfg) {
                const auto& g = problem.dfg[s.units[tr.unit].catalog_index];
                for (std::size_t l = 0; l < g.blocks.size(); ++l) {
                    c.fuel += w * dt * g.blocks[l].marginal_cost_per_kwh * tr.blocks[l][d][t];
                }
                c.no_load += w * dt * g.no_load_cost_per_h * tr.commit[d][t];
                c.startup += w * g.startup_cost * tr.startup[d][t];
            }
            c.energy += w * dt * day.pcc_price_per_kwh[t] * s.pcc[d][t];
            for (const auto& tr : s.ess) {
                const auto& e = problem.ess[s.units[tr.unit].catalog_index];
                c.degradation += w * dt * e.degradation_cost_per_kwh * (tr.charge[d][t] + tr.discharge[d][t]);
            }
            for (std::size_t h = 0; h < problem.houses.size(); ++h) {
                const auto& house = problem.houses[h];
                c.shedding += w * dt * house.shed_penalty_per_kwh * s.houses[h].shed[d][t];
                c.discomfort += w * house.thermal.discomfort_cost_per_degc *
                                std::abs(s.houses[h].t_in[d][t] - house.thermal.desired_temp_c[d][t]);
            }
        }
    }
    for (int g : month_groups(problem)) {
        double peak = 0.0;
        for (std::size_t d = 0; d < problem.days.size(); ++d) {
            if (problem.days[d].month_group == g) {
                for (double p : s.pcc[d]) {
                    peak = std::max(peak, p);
                }
            }
        }
        c.demand_charge += problem.pi2 * demand_charge_of(problem, g) * peak;
    }
    return c;
}

std::vector<double> solution_to_columns(const PlanSolution& s, const BuiltModel& built,
                                        const PlanningProblem& problem)
{
    const auto find_dfg = [&](int unit) -> const DfgTrace& {
        return *std::find_if(s.dfg.begin(), s.dfg.end(), [&](const DfgTrace& tr) { return tr.unit == unit; });
    };
    const auto find_ess = [&](int unit) -> const EssTrace& {
        return *std::find_if(s.ess.begin(), s.ess.end(), [&](const EssTrace& tr) { return tr.unit == unit; });
    };
    const auto find_res = [&](int unit) -> const ResTrace& {
        return *std::find_if(s.res.begin(), s.res.end(), [&](const ResTrace& tr) { return tr.unit == unit; });
    };

    std::vector<double> x(built.model.variable_count(), 0.0);
    for (int id = 0; id < built.index.size(); ++id) {
        const auto& k = built.index.key(id);
        const int e = k.entity;
        const int d = k.day;
        const int t = k.interval;
        double v = 0.0;
        switch (k.family) {
        case Family::install: v = s.installed.at(e) ? 1.0 : 0.0; break;
        case Family::dfg_power: v = find_dfg(e).power[d][t]; break;
        case Family::dfg_block: v = find_dfg(e).blocks[k.sub][d][t]; break;
        case Family::dfg_commit: v = find_dfg(e).commit[d][t]; break;
        case Family::dfg_startup: v = find_dfg(e).startup[d][t]; break;
        case Family::ess_charge: v = find_ess(e).charge[d][t]; break;
        case Family::ess_discharge: v = find_ess(e).discharge[d][t]; break;
        case Family::ess_soc: v = find_ess(e).soc[d][t]; break;
        case Family::res_power: v = find_res(e).power[d][t]; break;
        case Family::hvac_heat: v = s.houses[e].heat_on[d][t]; break;
        case Family::hvac_cool: v = s.houses[e].cool_on[d][t]; break;
        case Family::shed: v = s.houses[e].shed[d][t]; break;
        case Family::temp_indoor: v = s.houses[e].t_in[d][t]; break;
        case Family::temp_mass: v = s.houses[e].t_mass[d][t]; break;
        case Family::temp_envelope: v = s.houses[e].t_env[d][t]; break;
        case Family::slack_below:
            v = std::max(0.0, problem.houses[e].thermal.desired_temp_c[d][t] - s.houses[e].t_in[d][t]);
            break;
        case Family::slack_above:
            v = std::max(0.0, s.houses[e].t_in[d][t] - problem.houses[e].thermal.desired_temp_c[d][t]);
            break;
        case Family::pcc: v = s.pcc[d][t]; break;
        case Family::peak: {
            const auto it = s.peaks.find(e);
            v = it == s.peaks.end() ? 0.0 : it->second;
            break;
        }
        }
        x[id] = v;
    }
    return x;
}

}  // namespace mgplan
