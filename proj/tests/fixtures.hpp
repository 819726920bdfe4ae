#pragma once

// Small hand-built problems shared by the unit tests.

#include "mgplan/thermal.hpp"
#include "mgplan/types.hpp"

#include <algorithm>
#include <random>

namespace fixtures {

using namespace mgplan;

inline RepresentativeDay flat_day(int intervals, const std::string& label = "d0", double ambient = 10.0,
                                  double price = 0.10)
{
    RepresentativeDay d;
    d.label = label;
    d.month_group = 0;
    d.weight_days = 1.0;
    d.interval_count = intervals;
    d.dt_hours = 24.0 / intervals;
    d.ambient_temp_c.assign(intervals, ambient);
    d.irradiance_wm2.assign(intervals, 0.0);
    d.pcc_price_per_kwh.assign(intervals, price);
    d.demand_charge_per_kw = 1.0;
    return d;
}

/// House with the default RC network (time-stretched for coarse days), flat 21 +/- 2 comfort band and a 10 kW load.
inline HouseProfile house(int intervals, int days = 1, double load_kw = 10.0, const std::string& name = "h")
{
    HouseProfile h;
    h.name = name;
    h.thermal.dt_hours = 24.0 / intervals;
    // Capacitances grow with the step so one interval moves the house about
    // as much as a quarter hour moves the default house.
    RcParameters rc;
    const double stretch = std::max(1.0, h.thermal.dt_hours / 0.25);
    rc.c_indoor_kwh_per_degc *= stretch;
    rc.c_mass_kwh_per_degc *= stretch;
    rc.c_envelope_kwh_per_degc *= stretch;
    thermal::apply_rc(h, rc);
    for (int d = 0; d < days; ++d) {
        h.thermal.desired_temp_c.emplace_back(intervals, 21.0);
        h.thermal.band_halfwidth_c.emplace_back(intervals, 2.0);
        h.non_hvac_load_kw.emplace_back(intervals, load_kw);
        h.max_shed_kw.emplace_back(intervals, 0.1 * load_kw);
    }
    return h;
}

inline PlanningProblem base_problem(int intervals, int days = 1)
{
    PlanningProblem p;
    for (int d = 0; d < days; ++d) {
        auto day = flat_day(intervals, "d" + std::to_string(d));
        day.month_group = d;
        p.days.push_back(day);
    }
    p.budget = 0.0;
    p.pcc_limit_kw = 500.0;
    return p;
}

inline DfgCandidate diesel()
{
    DfgCandidate g;
    g.name = "DE";
    g.p_min_kw = 10.0;
    g.p_max_kw = 60.0;
    const double w = 50.0 / 3.0;
    g.blocks = {{0.2822, w}, {0.3732, w}, {0.4643, 50.0 - 2.0 * w}};
    g.no_load_cost_per_h = 4.0;
    g.startup_cost = 6.0;
    g.capital_cost_per_kw = 540.0;
    g.count_limit = 2;
    return g;
}

inline EssCandidate es1()
{
    EssCandidate e;
    e.name = "ES1";
    e.p_max_kw = 90.0;
    e.e_max_kwh = 150.0;
    e.soc_min_frac = 0.1;
    e.soc_max_frac = 0.9;
    e.eta_charge = e.eta_discharge = 0.95;
    e.power_cost_per_kw = 324.0;
    e.energy_cost_per_kwh = 180.0;
    e.count_limit = 2;
    return e;
}

inline ResCandidate wind(int intervals, int days = 1, double cf = 0.5)
{
    ResCandidate r;
    r.name = "WT";
    r.kind = ResKind::wind;
    r.p_max_kw = 120.0;
    r.capital_cost_per_kw = 2700.0;
    r.count_limit = 2;
    r.capacity_factor.assign(days, Series(intervals, cf));
    return r;
}

/// Randomized instance for the enumeration cross-check: one DFG unit, one
/// ESS unit, two houses, one day of four 6-hour intervals (22 binaries).
inline PlanningProblem tiny_instance(std::uint64_t seed, int n = 4)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PlanningProblem p = base_problem(n);
    auto& day = p.days[0];
    for (int t = 0; t < n; ++t) {
        day.ambient_temp_c[t] = 14.0 + 14.0 * u(rng);
        day.irradiance_wm2[t] = t == 1 || t == 2 ? 600.0 * u(rng) : 0.0;
        day.pcc_price_per_kwh[t] = 0.05 + 0.35 * u(rng);
    }
    day.demand_charge_per_kw = 0.5 + u(rng);
    p.pi1 = 20.0;

    auto g = diesel();
    g.count_limit = 1;
    g.p_min_kw = 2.0;
    g.p_max_kw = 20.0;
    g.blocks = {{0.10 + 0.1 * u(rng), 6.0}, {0.25, 6.0}, {0.35, 6.0}};
    g.capital_cost_per_kw = 20.0 + 20.0 * u(rng);
    p.dfg = {g};

    auto e = es1();
    e.count_limit = 1;
    e.p_max_kw = 10.0;
    e.e_max_kwh = 30.0;
    e.power_cost_per_kw = 10.0 + 10.0 * u(rng);
    e.energy_cost_per_kwh = 5.0 + 5.0 * u(rng);
    p.ess = {e};

    for (int h = 0; h < 2; ++h) {
        auto hp = house(n, 1, 4.0 + 8.0 * u(rng), "h" + std::to_string(h));
        hp.thermal.hvac_rated_power_kw = 0.5 + u(rng);
        hp.thermal.discomfort_cost_per_degc = 0.5 + u(rng);
        p.houses.push_back(hp);
    }
    p.budget = 150.0 + 300.0 * u(rng);
    return p;
}

}  // namespace fixtures
