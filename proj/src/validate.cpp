#include "mgplan/validate.hpp"

#include "mgplan/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace mgplan {

namespace {

class Checker {
public:
    void fail(std::string code, std::string where, std::string detail)
    {
        out_.push_back({std::move(code), std::move(where), std::move(detail)});
    }

    void require(bool ok, const char* code, const std::string& where, const std::string& detail)
    {
        if (!ok) {
            fail(code, where, detail);
        }
    }

    // Shape [days][intervals] matching the day list.
    bool check_shape(const DaySeries& series, const std::vector<RepresentativeDay>& days,
                     const std::string& where)
    {
        if (series.size() != days.size()) {
            fail("series-length-mismatch", where,
                 "expected " + std::to_string(days.size()) + " days, got " +
                     std::to_string(series.size()));
            return false;
        }
        bool ok = true;
        for (std::size_t d = 0; d < days.size(); ++d) {
            if (static_cast<int>(series[d].size()) != days[d].interval_count) {
                fail("series-length-mismatch", where + " day " + days[d].label,
                     "expected " + std::to_string(days[d].interval_count) + " intervals, got " +
                         std::to_string(series[d].size()));
                ok = false;
            }
            for (double v : series[d]) {
                if (!std::isfinite(v)) {
                    fail("non-finite", where + " day " + days[d].label, "series holds a non-finite value");
                    ok = false;
                    break;
                }
            }
        }
        return ok;
    }

    std::vector<Violation> take() { return std::move(out_); }

private:
    std::vector<Violation> out_;
};

bool all_of(const DaySeries& s, auto pred)
{
    return std::all_of(s.begin(), s.end(), [&](const Series& row) {
        return std::all_of(row.begin(), row.end(), pred);
    });
}

}  // namespace

std::vector<Violation> validate_problem(const PlanningProblem& p)
{
    Checker c;

    c.require(!p.days.empty(), "no-days", "problem", "at least one representative day is required");
    c.require(p.pi1 > 0.0, "scaling-factor-nonpositive", "problem", "pi1 must be positive");
    c.require(p.pi2 > 0.0, "scaling-factor-nonpositive", "problem", "pi2 must be positive");
    c.require(p.budget >= 0.0, "budget-negative", "problem", "budget must be non-negative");
    c.require(p.pcc_limit_kw > 0.0, "pcc-limit-nonpositive", "problem", "PCC limit must be positive");
    c.require(p.mip_rel_gap >= 0.0 && p.mip_rel_gap <= 1.0, "rel-gap-out-of-range", "problem",
              "mip_rel_gap must lie in [0,1]");
    for (const auto* f : {&p.wind_finance, &p.pv_finance, &p.dfg_finance, &p.ess_finance}) {
        c.require(f->interest_rate >= 0.0 && f->lifetime_years >= 1.0, "finance-out-of-range",
                  "problem", "interest rate must be >= 0 and lifetime >= 1 year");
    }

    std::map<int, double> demand_charge_by_month;
    for (const auto& day : p.days) {
        const std::string where = "day " + day.label;
        c.require(day.interval_count > 0 && day.dt_hours > 0.0 &&
                      std::abs(day.interval_count * day.dt_hours - 24.0) < 1e-9,
                  "day-length-mismatch", where,
                  std::to_string(day.interval_count) + " intervals of " +
                      std::to_string(day.dt_hours) + " h do not cover 24 h");
        c.require(day.weight_days > 0.0, "weight-nonpositive", where, "weight_days must be positive");
        c.require(day.demand_charge_per_kw >= 0.0, "cost-negative", where, "negative demand charge");
        for (const auto* s : {&day.ambient_temp_c, &day.irradiance_wm2, &day.pcc_price_per_kwh}) {
            c.require(static_cast<int>(s->size()) == day.interval_count, "series-length-mismatch",
                      where, "day series length differs from interval_count");
        }
        c.require(std::all_of(day.irradiance_wm2.begin(), day.irradiance_wm2.end(),
                              [](double v) { return std::isfinite(v) && v >= 0.0; }),
                  "irradiance-negative", where, "irradiance must be finite and non-negative");
        auto [it, inserted] = demand_charge_by_month.emplace(day.month_group, day.demand_charge_per_kw);
        if (!inserted) {
            c.require(it->second == day.demand_charge_per_kw, "demand-charge-inconsistent", where,
                      "days sharing a month group must share a demand charge");
        }
    }

    for (const auto& h : p.houses) {
        const std::string where = "house " + h.name;
        const auto& th = h.thermal;
        c.require(thermal::spectral_radius(th.a_matrix) < 1.0, "thermal-unstable", where,
                  "state-transition matrix spectral radius must be < 1");
        c.require(th.a_matrix.allFinite() && th.b_matrix.allFinite(), "non-finite", where,
                  "thermal matrices hold non-finite entries");
        c.require(th.hvac_rated_power_kw > 0.0, "hvac-rating-nonpositive", where,
                  "HVAC rated power must be positive");
        c.require(th.cop > 0.0, "cop-nonpositive", where, "COP must be positive");
        c.require(th.discomfort_cost_per_degc >= 0.0, "cost-negative", where, "negative discomfort cost");
        c.require(h.shed_penalty_per_kwh >= 0.0, "cost-negative", where, "negative shed penalty");
        for (const auto& day : p.days) {
            c.require(std::abs(day.dt_hours - th.dt_hours) < 1e-12, "dt-mismatch", where,
                      "thermal model step differs from day " + day.label + " resolution");
        }
        c.check_shape(th.desired_temp_c, p.days, where + " desired_temp_c");
        if (c.check_shape(th.band_halfwidth_c, p.days, where + " band_halfwidth_c")) {
            c.require(all_of(th.band_halfwidth_c, [](double v) { return v >= 0.0; }), "band-negative",
                      where, "comfort band half-width must be non-negative");
        }
        const bool load_ok = c.check_shape(h.non_hvac_load_kw, p.days, where + " non_hvac_load_kw");
        const bool shed_ok = c.check_shape(h.max_shed_kw, p.days, where + " max_shed_kw");
        if (load_ok && shed_ok) {
            bool ok = true;
            for (std::size_t d = 0; d < p.days.size(); ++d) {
                for (std::size_t t = 0; t < h.max_shed_kw[d].size(); ++t) {
                    ok = ok && h.max_shed_kw[d][t] >= 0.0 && h.max_shed_kw[d][t] <= h.non_hvac_load_kw[d][t];
                }
            }
            c.require(ok, "shed-limit-out-of-range", where, "need 0 <= max shed <= non-HVAC load");
        }
        if (h.rc) {
            const auto& rc = *h.rc;
            c.require(rc.c_indoor_kwh_per_degc > 0 && rc.c_mass_kwh_per_degc > 0 &&
                          rc.c_envelope_kwh_per_degc > 0 && rc.r_indoor_mass_degc_per_kw > 0 &&
                          rc.r_indoor_envelope_degc_per_kw > 0 &&
                          rc.r_envelope_ambient_degc_per_kw > 0 && rc.r_indoor_ambient_degc_per_kw > 0 &&
                          rc.window_area_m2 >= 0 && rc.solar_to_mass_fraction >= 0 &&
                          rc.solar_to_mass_fraction <= 1,
                      "rc-out-of-range", where, "RC parameters must be positive, fraction in [0,1]");
        }
    }

    for (const auto& g : p.dfg) {
        const std::string where = "dfg " + g.name;
        c.require(g.count_limit >= 0, "count-limit-negative", where, "count limit must be >= 0");
        c.require(g.p_min_kw >= 0.0 && g.p_min_kw <= g.p_max_kw, "dfg-limits-inconsistent", where,
                  "need 0 <= p_min <= p_max");
        double width = 0.0;
        bool widths_ok = true;
        bool convex = true;
        for (std::size_t l = 0; l < g.blocks.size(); ++l) {
            width += g.blocks[l].width_kw;
            widths_ok = widths_ok && g.blocks[l].width_kw >= 0.0;
            if (l > 0) {
                convex = convex && g.blocks[l].marginal_cost_per_kwh >= g.blocks[l - 1].marginal_cost_per_kwh;
            }
            c.require(g.blocks[l].marginal_cost_per_kwh >= 0.0, "cost-negative", where,
                      "negative block marginal cost");
        }
        c.require(widths_ok && std::abs(width - (g.p_max_kw - g.p_min_kw)) <= 1e-9 * std::max(1.0, g.p_max_kw),
                  "dfg-block-widths", where, "block widths must sum to p_max - p_min");
        c.require(convex, "dfg-cost-not-convex", where, "block marginal costs must be non-decreasing");
        c.require(g.no_load_cost_per_h >= 0.0 && g.startup_cost >= 0.0 && g.capital_cost_per_kw >= 0.0,
                  "cost-negative", where, "negative cost");
    }

    for (const auto& r : p.res) {
        const std::string where = "res " + r.name;
        c.require(r.count_limit >= 0, "count-limit-negative", where, "count limit must be >= 0");
        c.require(r.p_max_kw > 0.0, "res-rating-nonpositive", where, "p_max must be positive");
        c.require(r.capital_cost_per_kw >= 0.0, "cost-negative", where, "negative capital cost");
        if (c.check_shape(r.capacity_factor, p.days, where + " capacity_factor")) {
            c.require(all_of(r.capacity_factor, [](double v) { return v >= 0.0 && v <= 1.0; }),
                      "capacity-factor-out-of-range", where, "capacity factors must lie in [0,1]");
        }
    }

    for (const auto& e : p.ess) {
        const std::string where = "ess " + e.name;
        c.require(e.count_limit >= 0, "count-limit-negative", where, "count limit must be >= 0");
        c.require(e.p_max_kw > 0.0 && e.e_max_kwh > 0.0, "ess-rating-nonpositive", where,
                  "power and energy ratings must be positive");
        c.require(0.0 <= e.soc_min_frac && e.soc_min_frac <= e.soc_max_frac && e.soc_max_frac <= 1.0,
                  "soc-fraction-out-of-range", where, "need 0 <= soc_min <= soc_max <= 1");
        c.require(e.eta_charge > 0.0 && e.eta_charge <= 1.0 && e.eta_discharge > 0.0 &&
                      e.eta_discharge <= 1.0,
                  "efficiency-out-of-range", where, "efficiencies must lie in (0,1]");
        c.require(e.power_cost_per_kw >= 0.0 && e.energy_cost_per_kwh >= 0.0 &&
                      e.degradation_cost_per_kwh >= 0.0,
                  "cost-negative", where, "negative cost");
    }

    return c.take();
}

std::string describe(const std::vector<Violation>& violations)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0) {
            out << '\n';
        }
        out << violations[i].code << " at " << violations[i].where << ": " << violations[i].detail;
    }
    return out.str();
}

bool has_violation(const std::vector<Violation>& violations, const std::string& code)
{
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

}  // namespace mgplan
