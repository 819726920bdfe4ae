#include "mgplan/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mgplan {

namespace {

constexpr double kInside = 1e-7;  // keep rounded trajectories strictly inside the band

ThermalState advance(const ThermalModel& model, const RepresentativeDay& day, int t, const ThermalState& s,
                     int decision)
{
    const thermal::ThermalInput in{day.ambient_temp_c[t], day.irradiance_wm2[t],
                                   decision * model.hvac_thermal_kw()};
    return thermal::step(model, s, in);
}

double band_violation(double t_in, double lower, double upper)
{
    return std::max({0.0, lower + kInside - t_in, t_in - (upper - kInside)});
}

// Violation of the better of the three decisions one step further on.
double lookahead(const ThermalModel& model, const RepresentativeDay& day, int t, const ThermalState& s,
                 const std::vector<double>& lower, const std::vector<double>& upper)
{
    if (t >= day.interval_count) {
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int d : {0, 1, -1}) {
        const auto next = advance(model, day, t, s, d);
        best = std::min(best, band_violation(next.t_in_c, lower[t], upper[t]));
    }
    return best;
}

}  // namespace

std::vector<int> round_hvac_schedule(const ThermalModel& model, const RepresentativeDay& day,
                                     const ThermalState& initial, const std::vector<double>& target,
                                     const std::vector<double>& lower, const std::vector<double>& upper)
{
    const int n = day.interval_count;
    std::vector<int> out(n, 0);
    ThermalState s = initial;
    double carry = 0.0;
    for (int t = 0; t < n; ++t) {
        carry += target[t];
        std::array<int, 3> order{-1, 0, 1};
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return std::abs(carry - a) < std::abs(carry - b); });
        int chosen = order[0];
        double chosen_score = std::numeric_limits<double>::infinity();
        for (int d : order) {
            const auto next = advance(model, day, t, s, d);
            const double now = band_violation(next.t_in_c, lower[t], upper[t]);
            const double score = now * 1e3 + lookahead(model, day, t + 1, next, lower, upper);
            if (score < chosen_score) {
                chosen = d;
                chosen_score = score;
            }
            if (score == 0.0) {
                break;
            }
        }
        out[t] = chosen;
        carry -= chosen;
        s = advance(model, day, t, s, chosen);
    }
    return out;
}

std::optional<std::vector<double>> rounding_start(const BuiltModel& built, const PlanningProblem& problem,
                                                  const solver::SolveOptions& options)
{
    if (built.mode != ControlMode::surrogate) {
        return std::nullopt;
    }
    solver::SolveOptions lp_options = options;
    lp_options.start.clear();
    const auto relaxed = solver::solve_relaxation(built.model, lp_options);
    if (relaxed.status != solver::SolveStatus::optimal) {
        return std::nullopt;
    }

    MilpModel fixed = built.model;
    const auto& vars = built.model.variables();
    for (int h = 0; h < static_cast<int>(problem.houses.size()); ++h) {
        const auto& thermal = problem.houses[h].thermal;
        for (int d = 0; d < static_cast<int>(problem.days.size()); ++d) {
            const auto& day = problem.days[d];
            const int n = day.interval_count;
            std::vector<double> target(n), lower(n), upper(n);
            std::vector<int> heat(n), cool(n);
            for (int t = 0; t < n; ++t) {
                heat[t] = built.index.at({Family::hvac_heat, h, d, t, -1});
                cool[t] = built.index.at({Family::hvac_cool, h, d, t, -1});
                const int tin = built.index.at({Family::temp_indoor, h, d, t, -1});
                target[t] = relaxed.values[heat[t]] - relaxed.values[cool[t]];
                lower[t] = vars[tin].lower;
                upper[t] = vars[tin].upper;
            }
            const auto decisions =
                round_hvac_schedule(thermal, day, initial_state_for(problem, h, d), target, lower, upper);
            for (int t = 0; t < n; ++t) {
                const double uh = decisions[t] > 0 ? 1.0 : 0.0;
                const double uc = decisions[t] < 0 ? 1.0 : 0.0;
                fixed.set_bounds(heat[t], uh, uh);
                fixed.set_bounds(cool[t], uc, uc);
            }
        }
    }
    auto outcome = solver::solve(fixed, lp_options);
    if (!outcome.has_solution() || built.model.max_violation(outcome.values) > 1e-6) {
        return std::nullopt;
    }
    return std::move(outcome.values);
}

PlanRun run_plan(const PlanningProblem& problem, const PlanOptions& options)
{
    PlanRun run;
    ControlSchedules schedules;
    BuildOptions build_options{options.mode, nullptr, options.startup_binary};
    if (options.mode == ControlMode::simple) {
        schedules = simulate_simple_schedules(problem);
        build_options.schedules = &schedules;
    }
    run.built = build(problem, build_options);
    const auto& model = run.built.model;

    std::vector<std::vector<double>> candidates;
    if (!options.solve.start.empty()) {
        candidates.push_back(options.solve.start);
    }
    if (options.warm != nullptr) {
        candidates.push_back(solution_to_columns(*options.warm, run.built, problem));
    }
    if (options.rounding_start && options.mode == ControlMode::surrogate && !problem.houses.empty()) {
        if (auto start = rounding_start(run.built, problem, options.solve)) {
            candidates.push_back(std::move(*start));
        }
    }

    solver::SolveOptions solve_options = options.solve;
    solve_options.start.clear();
    for (auto& c : candidates) {
        if (static_cast<int>(c.size()) != model.variable_count() || model.max_violation(c) > 1e-6) {
            continue;
        }
        const double obj = model.evaluate_objective(c);
        if (!run.start_objective || obj < *run.start_objective) {
            run.start_objective = obj;
            solve_options.start = std::move(c);
        }
    }

    run.outcome = solver::solve(model, solve_options);
    if (run.outcome.has_solution()) {
        run.solution = extract_solution(run.outcome.values, run.built, problem, run.outcome.objective);
    }
    return run;
}

}  // namespace mgplan
