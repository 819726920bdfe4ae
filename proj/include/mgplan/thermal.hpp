#pragma once

// Building thermal dynamics: RC discretization, state stepping, the
// price-blind hysteresis thermostat, and population perturbation.

#include "mgplan/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mgplan::thermal {

enum class HvacMode { heat, cool };

const char* to_string(HvacMode mode);

struct ThermalInput {
    double ambient_c = 0.0;
    double irradiance_wm2 = 0.0;
    double hvac_thermal_kw = 0.0;  // (u_heat - u_cool) * cop * rated power

    Vector3 vec() const { return {ambient_c, irradiance_wm2, hvac_thermal_kw}; }
};

struct ThermalMatrices {
    Matrix3 a_matrix;
    Matrix3 b_matrix;
};

class DiscretizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double spectral_radius(const Matrix3& m);

/// Forward-Euler discretization of the 3-node RC network:
///   indoor  <-> mass      (r_indoor_mass)
///   indoor  <-> envelope  (r_indoor_envelope)
///   envelope <-> ambient  (r_envelope_ambient)
///   indoor  <-> ambient   (r_indoor_ambient)
/// Solar gain through the windows splits between indoor air and mass;
/// HVAC heat enters the indoor node. Infinite resistances decouple nodes.
/// Throws DiscretizationError when the result grows (spectral radius > 1).
/// Lossless networks come out marginally stable; validate_problem still
/// requires strict stability for houses in a planning problem.
ThermalMatrices build_thermal_model(const RcParameters& rc, double dt_hours);

/// A * state + B * input.
ThermalState step(const ThermalModel& model, const ThermalState& state, const ThermalInput& input);

/// Signed thermal input for a heat/cool on-off pair.
double hvac_input_kw(const ThermalModel& model, bool heat_on, bool cool_on);

/// Heating for "winter", cooling for "summer"; otherwise heating iff the
/// day's mean ambient is below the mean desired temperature.
HvacMode season_mode(const RepresentativeDay& day, const Series& desired_temp_c);

struct SimulationResult {
    std::vector<ThermalState> states;  // states[t] at the start of interval t; size T+1
    std::vector<int> on;               // on/off decision applied during interval t; size T
    HvacMode mode = HvacMode::heat;
};

/// Roll the model through a day with an explicit on/off schedule.
SimulationResult simulate_schedule(const ThermalModel& model, const RepresentativeDay& day,
                                   const ThermalState& initial, const std::vector<int>& on,
                                   HvacMode mode);

/// Hysteresis thermostat. Heating: switch on when T_in < T_d - theta, stay on
/// until T_in >= T_d + theta (cooling mirrors). The decision for interval t
/// is taken from the state at the start of t; the unit starts off.
SimulationResult simulate_simple_control(const ThermalModel& model, const RepresentativeDay& day,
                                         int day_index, const ThermalState& initial, HvacMode mode);

/// Largest one-interval change of indoor temperature along a trajectory.
double max_indoor_step(const SimulationResult& result);

/// n houses whose RC parameters are independently scaled by (1 + std_frac * N(0,1)),
/// clipped positive (the solar fraction is clipped to [0,1]). Unstable draws are
/// resampled, up to 100 attempts per house. Requires base.rc.
std::vector<HouseProfile> perturb_houses(const HouseProfile& base, int n, double std_frac,
                                         std::uint64_t seed);

/// Replace a house's matrices with the discretization of its RC parameters.
void apply_rc(HouseProfile& house, const RcParameters& rc);

}  // namespace mgplan::thermal
