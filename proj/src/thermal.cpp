#include "mgplan/thermal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mgplan::thermal {

const char* to_string(HvacMode mode)
{
    return mode == HvacMode::heat ? "heat" : "cool";
}

double spectral_radius(const Matrix3& m)
{
    if (!m.allFinite()) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::EigenSolver<Matrix3> solver(m, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

ThermalMatrices build_thermal_model(const RcParameters& rc, double dt_hours)
{
    if (!(dt_hours > 0.0)) {
        throw InvalidArgument("build_thermal_model: dt_hours must be positive");
    }
    const double g_im = 1.0 / rc.r_indoor_mass_degc_per_kw;
    const double g_ie = 1.0 / rc.r_indoor_envelope_degc_per_kw;
    const double g_ea = 1.0 / rc.r_envelope_ambient_degc_per_kw;
    const double g_ia = 1.0 / rc.r_indoor_ambient_degc_per_kw;
    const double ci = rc.c_indoor_kwh_per_degc;
    const double cm = rc.c_mass_kwh_per_degc;
    const double ce = rc.c_envelope_kwh_per_degc;
    const double solar_kw = rc.window_area_m2 / 1000.0;  // W/m2 -> kW per unit irradiance
    const double f = rc.solar_to_mass_fraction;

    Matrix3 ac;
    ac << -(g_im + g_ie + g_ia) / ci, g_im / ci, g_ie / ci,
          g_im / cm, -g_im / cm, 0.0,
          g_ie / ce, 0.0, -(g_ie + g_ea) / ce;
    Matrix3 bc;
    bc << g_ia / ci, (1.0 - f) * solar_kw / ci, 1.0 / ci,
          0.0, f * solar_kw / cm, 0.0,
          g_ea / ce, 0.0, 0.0;

    ThermalMatrices out{Matrix3::Identity() + dt_hours * ac, dt_hours * bc};
    const double rho = spectral_radius(out.a_matrix);
    // A lossless network is marginally stable (rho == 1) at any step; only
    // growth beyond one is the signature of a step that is too coarse.
    if (!(rho <= 1.0 + 1e-12)) {
        throw DiscretizationError("discretization-too-coarse: spectral radius " + std::to_string(rho) +
                                  " at dt = " + std::to_string(dt_hours) + " h");
    }
    return out;
}

ThermalState step(const ThermalModel& model, const ThermalState& state, const ThermalInput& input)
{
    return ThermalState::from(model.a_matrix * state.vec() + model.b_matrix * input.vec());
}

double hvac_input_kw(const ThermalModel& model, bool heat_on, bool cool_on)
{
    return (static_cast<double>(heat_on) - static_cast<double>(cool_on)) * model.hvac_thermal_kw();
}

HvacMode season_mode(const RepresentativeDay& day, const Series& desired_temp_c)
{
    if (day.label == "winter") {
        return HvacMode::heat;
    }
    if (day.label == "summer") {
        return HvacMode::cool;
    }
    const auto mean = [](const Series& s) {
        return s.empty() ? 0.0 : std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    };
    return mean(day.ambient_temp_c) < mean(desired_temp_c) ? HvacMode::heat : HvacMode::cool;
}

SimulationResult simulate_schedule(const ThermalModel& model, const RepresentativeDay& day,
                                   const ThermalState& initial, const std::vector<int>& on,
                                   HvacMode mode)
{
    SimulationResult r;
    r.mode = mode;
    r.on = on;
    r.states.reserve(on.size() + 1);
    r.states.push_back(initial);
    for (std::size_t t = 0; t < on.size(); ++t) {
        const bool running = on[t] != 0;
        const ThermalInput input{day.ambient_temp_c[t], day.irradiance_wm2[t],
                                 hvac_input_kw(model, running && mode == HvacMode::heat,
                                               running && mode == HvacMode::cool)};
        r.states.push_back(step(model, r.states.back(), input));
    }
    return r;
}

SimulationResult simulate_simple_control(const ThermalModel& model, const RepresentativeDay& day,
                                         int day_index, const ThermalState& initial, HvacMode mode)
{
    const auto& desired = model.desired_temp_c.at(day_index);
    const auto& band = model.band_halfwidth_c.at(day_index);

    SimulationResult r;
    r.mode = mode;
    r.states.reserve(day.interval_count + 1);
    r.states.push_back(initial);
    r.on.reserve(day.interval_count);

    bool running = false;
    for (int t = 0; t < day.interval_count; ++t) {
        const double tin = r.states.back().t_in_c;
        const double floor = desired[t] - band[t];
        const double ceiling = desired[t] + band[t];
        if (mode == HvacMode::heat) {
            if (!running && tin < floor) {
                running = true;
            } else if (running && tin >= ceiling) {
                running = false;
            }
        } else {
            if (!running && tin > ceiling) {
                running = true;
            } else if (running && tin <= floor) {
                running = false;
            }
        }
        r.on.push_back(running ? 1 : 0);
        const ThermalInput input{day.ambient_temp_c[t], day.irradiance_wm2[t],
                                 hvac_input_kw(model, running && mode == HvacMode::heat,
                                               running && mode == HvacMode::cool)};
        r.states.push_back(step(model, r.states.back(), input));
    }
    return r;
}

double max_indoor_step(const SimulationResult& result)
{
    double worst = 0.0;
    for (std::size_t t = 1; t < result.states.size(); ++t) {
        worst = std::max(worst, std::abs(result.states[t].t_in_c - result.states[t - 1].t_in_c));
    }
    return worst;
}

void apply_rc(HouseProfile& house, const RcParameters& rc)
{
    const auto m = build_thermal_model(rc, house.thermal.dt_hours);
    house.thermal.a_matrix = m.a_matrix;
    house.thermal.b_matrix = m.b_matrix;
    house.rc = rc;
}

std::vector<HouseProfile> perturb_houses(const HouseProfile& base, int n, double std_frac,
                                         std::uint64_t seed)
{
    if (n < 1) {
        throw InvalidArgument("perturb_houses: n must be >= 1");
    }
    if (!(std_frac >= 0.0)) {
        throw InvalidArgument("perturb_houses: std_frac must be >= 0");
    }
    if (!base.rc) {
        throw InvalidArgument("perturb_houses: base house carries no RC parameters");
    }
    constexpr int kMaxAttempts = 100;
    constexpr double kMinScale = 0.05;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto scale = [&](double nominal) {
        return nominal * std::max(kMinScale, 1.0 + std_frac * normal(rng));
    };

    std::vector<HouseProfile> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        HouseProfile house = base;
        house.name = base.name + "-" + std::to_string(i);
        bool built = false;
        for (int attempt = 0; attempt < kMaxAttempts && !built; ++attempt) {
            RcParameters rc = *base.rc;
            rc.c_indoor_kwh_per_degc = scale(rc.c_indoor_kwh_per_degc);
            rc.c_mass_kwh_per_degc = scale(rc.c_mass_kwh_per_degc);
            rc.c_envelope_kwh_per_degc = scale(rc.c_envelope_kwh_per_degc);
            rc.r_indoor_mass_degc_per_kw = scale(rc.r_indoor_mass_degc_per_kw);
            rc.r_indoor_envelope_degc_per_kw = scale(rc.r_indoor_envelope_degc_per_kw);
            rc.r_envelope_ambient_degc_per_kw = scale(rc.r_envelope_ambient_degc_per_kw);
            rc.r_indoor_ambient_degc_per_kw = scale(rc.r_indoor_ambient_degc_per_kw);
            rc.window_area_m2 = scale(rc.window_area_m2);
            rc.solar_to_mass_fraction = std::clamp(scale(rc.solar_to_mass_fraction), 0.0, 1.0);
            try {
                apply_rc(house, rc);
                built = true;
            } catch (const DiscretizationError&) {
            }
        }
        if (!built) {
            throw DiscretizationError("perturb_houses: no stable draw for house " + house.name +
                                      " after 100 attempts");
        }
        out.push_back(std::move(house));
    }
    return out;
}

}  // namespace mgplan::thermal
