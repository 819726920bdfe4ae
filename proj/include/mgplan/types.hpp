#pragma once

// Domain records for community microgrid planning.
//
// Units throughout: power kW, energy kWh, temperature degC, money in an
// abstract currency. Time-series indexed [day][interval] are stored as
// DaySeries. All records are plain values; nothing here owns a resource.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgplan {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

/// One value per interval of one day.
using Series = std::vector<double>;
/// Indexed [day][interval].
using DaySeries = std::vector<Series>;

/// Default ESS degradation cost (currency/kWh throughput).
inline constexpr double kDefaultDegradationCost = 0.01;

/// Third-order building model x[t+1] = A x[t] + B u[t].
///
/// State x = [indoor, inner-mass layer, envelope] temperatures (degC).
/// Input u = [ambient degC, irradiance W/m2, signed HVAC thermal kW].
struct ThermalModel {
    Matrix3 a_matrix = Matrix3::Identity();
    Matrix3 b_matrix = Matrix3::Zero();
    double dt_hours = 0.25;
    double hvac_rated_power_kw = 5.0;  // electrical
    double cop = 4.0;
    DaySeries desired_temp_c;
    DaySeries band_halfwidth_c;
    double discomfort_cost_per_degc = 0.05;

    /// Thermal injection magnitude when the unit runs (kW).
    double hvac_thermal_kw() const { return cop * hvac_rated_power_kw; }

    bool operator==(const ThermalModel& other) const;
};

/// Lumped RC description of a house, discretized by thermal::build_thermal_model.
struct RcParameters {
    double c_indoor_kwh_per_degc = 25.0;  // air plus furnishings
    double c_mass_kwh_per_degc = 30.0;
    double c_envelope_kwh_per_degc = 15.0;
    double r_indoor_mass_degc_per_kw = 0.5;
    double r_indoor_envelope_degc_per_kw = 1.5;
    double r_envelope_ambient_degc_per_kw = 1.2;
    double r_indoor_ambient_degc_per_kw = 8.0;  // infiltration + windows
    double window_area_m2 = 6.0;
    double solar_to_mass_fraction = 0.6;

    bool operator==(const RcParameters&) const = default;
};

struct HouseProfile {
    std::string name;
    ThermalModel thermal;
    std::optional<RcParameters> rc;
    DaySeries non_hvac_load_kw;
    DaySeries max_shed_kw;
    double shed_penalty_per_kwh = 10.0;

    bool operator==(const HouseProfile&) const = default;
};

struct CostBlock {
    double marginal_cost_per_kwh = 0.0;
    double width_kw = 0.0;

    bool operator==(const CostBlock&) const = default;
};

/// Dispatchable fuel generator catalog entry.
struct DfgCandidate {
    std::string name;
    double p_min_kw = 0.0;
    double p_max_kw = 0.0;
    std::vector<CostBlock> blocks;
    double no_load_cost_per_h = 0.0;  // charged per committed interval, scaled by dt
    double startup_cost = 0.0;        // per start
    double capital_cost_per_kw = 0.0;
    int count_limit = 1;

    bool operator==(const DfgCandidate&) const = default;
};

enum class ResKind { wind, pv };

struct ResCandidate {
    std::string name;
    ResKind kind = ResKind::pv;
    double p_max_kw = 0.0;
    DaySeries capacity_factor;
    double capital_cost_per_kw = 0.0;
    int count_limit = 1;

    bool operator==(const ResCandidate&) const = default;
};

struct EssCandidate {
    std::string name;
    double p_max_kw = 0.0;
    double e_max_kwh = 0.0;
    double soc_min_frac = 0.0;
    double soc_max_frac = 1.0;
    double eta_charge = 1.0;
    double eta_discharge = 1.0;
    double power_cost_per_kw = 0.0;
    double energy_cost_per_kwh = 0.0;
    double degradation_cost_per_kwh = kDefaultDegradationCost;
    int count_limit = 1;

    /// Stored energy at the start and end of every representative day.
    double cyclic_soc_kwh() const
    {
        return e_max_kwh * (soc_min_frac + 0.5 * (soc_max_frac - soc_min_frac));
    }

    bool operator==(const EssCandidate&) const = default;
};

struct RepresentativeDay {
    std::string label;
    int month_group = 0;
    double weight_days = 1.0;
    int interval_count = 96;
    double dt_hours = 0.25;
    Series ambient_temp_c;
    Series irradiance_wm2;
    Series pcc_price_per_kwh;
    double demand_charge_per_kw = 0.0;

    bool operator==(const RepresentativeDay&) const = default;
};

struct Financials {
    double interest_rate = 0.05;
    double lifetime_years = 10.0;

    bool operator==(const Financials&) const = default;
};

struct ThermalState {
    double t_in_c = 0.0;
    double t_mass_c = 0.0;
    double t_env_c = 0.0;

    Vector3 vec() const { return {t_in_c, t_mass_c, t_env_c}; }
    static ThermalState from(const Vector3& v) { return {v(0), v(1), v(2)}; }
    static ThermalState uniform(double t) { return {t, t, t}; }

    bool operator==(const ThermalState&) const = default;
};

struct PlanningProblem {
    std::vector<HouseProfile> houses;
    std::vector<DfgCandidate> dfg;
    std::vector<ResCandidate> res;
    std::vector<EssCandidate> ess;
    std::vector<RepresentativeDay> days;

    double pcc_limit_kw = 500.0;
    double budget = 0.0;

    Financials wind_finance;
    Financials pv_finance;
    Financials dfg_finance;
    Financials ess_finance;

    // Operation costs of day d are weighted by pi1 * days[d].weight_days;
    // each month group's peak charge is weighted by pi2.
    double pi1 = 1.0;
    double pi2 = 1.0;
    double mip_rel_gap = 0.005;

    // Thermal state at the start of every representative day. When unset,
    // all three nodes start at the house's desired temperature of interval 0.
    std::optional<ThermalState> initial_state;

    bool operator==(const PlanningProblem&) const = default;
};

/// Which kind of catalog entry an installable unit comes from.
enum class UnitClass { wind, pv, dfg, ess };

/// One installable copy of a catalog entry.
struct InstallUnit {
    UnitClass unit_class = UnitClass::pv;
    int catalog_index = 0;  // index into problem.res / dfg / ess
    int copy = 0;           // 0 .. count_limit-1
    std::string name;       // "<entry>#<copy>"

    bool operator==(const InstallUnit&) const = default;
};

/// Expand catalogs into individual units, ordered RES, DFG, ESS.
std::vector<InstallUnit> expand_units(const PlanningProblem& problem);

/// r(1+r)^n / ((1+r)^n - 1), or 1/n when r == 0.
double annuity_factor(double rate, double lifetime_years);

/// Annualized investment cost of one unit.
double annualized_investment(const PlanningProblem& problem, const InstallUnit& unit);

const char* to_string(ResKind kind);
const char* to_string(UnitClass unit_class);

/// Initial thermal state of a house on a day, honoring problem.initial_state.
ThermalState initial_state_for(const PlanningProblem& problem, int house, int day);

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mgplan
