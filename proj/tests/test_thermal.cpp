#include "fixtures.hpp"

#include "mgplan/thermal.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace mgplan;
using namespace mgplan::thermal;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hand-written Euler matrices for the RC network, entry by entry.
ThermalMatrices euler_by_hand(const RcParameters& rc, double dt)
{
    const double gim = 1.0 / rc.r_indoor_mass_degc_per_kw;
    const double gie = 1.0 / rc.r_indoor_envelope_degc_per_kw;
    const double gea = 1.0 / rc.r_envelope_ambient_degc_per_kw;
    const double gia = 1.0 / rc.r_indoor_ambient_degc_per_kw;
    const double ci = rc.c_indoor_kwh_per_degc;
    const double cm = rc.c_mass_kwh_per_degc;
    const double ce = rc.c_envelope_kwh_per_degc;
    const double solar = rc.window_area_m2 / 1000.0;
    const double f = rc.solar_to_mass_fraction;
    ThermalMatrices m;
    m.a_matrix << 1 - dt * (gim + gie + gia) / ci, dt * gim / ci, dt * gie / ci,  //
        dt * gim / cm, 1 - dt * gim / cm, 0,                                      //
        dt * gie / ce, 0, 1 - dt * (gie + gea) / ce;
    m.b_matrix << dt * gia / ci, dt * (1 - f) * solar / ci, dt / ci,  //
        0, dt * f * solar / cm, 0,                                    //
        dt * gea / ce, 0, 0;
    return m;
}

ThermalModel model_of(const RcParameters& rc, double dt)
{
    ThermalModel m;
    m.dt_hours = dt;
    const auto mats = build_thermal_model(rc, dt);
    m.a_matrix = mats.a_matrix;
    m.b_matrix = mats.b_matrix;
    return m;
}

// Exact solution of the continuous network under constant input, by a fine
// Euler march (step 1e-4 h) used as the reference trajectory.
Vector3 fine_reference(const RcParameters& rc, const Vector3& x0, const Vector3& u, double horizon)
{
    const int n = 20000;
    const auto m = build_thermal_model(rc, horizon / n);
    Vector3 x = x0;
    for (int k = 0; k < n; ++k) {
        x = m.a_matrix * x + m.b_matrix * u;
    }
    return x;
}

}  // namespace

TEST_CASE("decoupled lossless nodes give the identity")
{
    RcParameters rc;
    rc.r_indoor_mass_degc_per_kw = kInf;
    rc.r_indoor_envelope_degc_per_kw = kInf;
    rc.r_envelope_ambient_degc_per_kw = kInf;
    rc.r_indoor_ambient_degc_per_kw = kInf;
    const auto m = build_thermal_model(rc, 0.25);
    CHECK(m.a_matrix == Matrix3::Identity());
}

TEST_CASE("discretization matches the hand-built Euler matrices")
{
    const RcParameters rc;
    const auto m = build_thermal_model(rc, 0.25);
    const auto ref = euler_by_hand(rc, 0.25);
    CHECK((m.a_matrix - ref.a_matrix).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((m.b_matrix - ref.b_matrix).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("temperature offsets pass through unchanged")
{
    // Raising every node and the ambient by c raises the next state by c:
    // row sums of A plus the ambient column of B equal one.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    for (int k = 0; k < 50; ++k) {
        RcParameters rc;
        rc.c_indoor_kwh_per_degc *= scale(rng);
        rc.c_mass_kwh_per_degc *= scale(rng);
        rc.r_indoor_mass_degc_per_kw *= scale(rng);
        rc.r_envelope_ambient_degc_per_kw *= scale(rng);
        const auto m = build_thermal_model(rc, 0.25);
        for (int i = 0; i < 3; ++i) {
            CHECK(m.a_matrix.row(i).sum() + m.b_matrix(i, 0) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("halving the step converges at first order")
{
    const RcParameters rc;
    const Vector3 x0{21.0, 20.0, 12.0};
    const Vector3 u{-5.0, 300.0, 20.0};
    const double horizon = 1.0;
    const auto exact = fine_reference(rc, x0, u, horizon);
    double previous = 0.0;
    for (int n : {4, 8, 16, 32}) {
        const auto m = build_thermal_model(rc, horizon / n);
        Vector3 x = x0;
        for (int k = 0; k < n; ++k) {
            x = m.a_matrix * x + m.b_matrix * u;
        }
        const double err = (x - exact).cwiseAbs().maxCoeff();
        if (previous > 0.0) {
            // Global error O(dt): halving dt roughly halves it. The local
            // (one-step) error is O(dt^2).
            CHECK(err / previous == doctest::Approx(0.5).epsilon(0.15));
        }
        previous = err;
    }
    const auto full = build_thermal_model(rc, 0.5);
    const auto half = build_thermal_model(rc, 0.25);
    const auto quarter = build_thermal_model(rc, 0.125);
    const Vector3 one = full.a_matrix * x0 + full.b_matrix * u;
    const Vector3 two = half.a_matrix * (half.a_matrix * x0 + half.b_matrix * u) + half.b_matrix * u;
    Vector3 four = x0;
    for (int k = 0; k < 4; ++k) {
        four = quarter.a_matrix * four + quarter.b_matrix * u;
    }
    const Vector3 local_exact = fine_reference(rc, x0, u, 0.5);
    const double e_one = (one - local_exact).cwiseAbs().maxCoeff();
    const double e_two = (two - local_exact).cwiseAbs().maxCoeff();
    const double e_four = (four - local_exact).cwiseAbs().maxCoeff();
    CHECK(e_two < e_one);
    CHECK(e_four < e_two);
    CHECK(e_one < 0.5 * 0.5 * 10.0);  // O(dt^2) with a modest constant
}

TEST_CASE("steps too coarse for the time constants are rejected")
{
    const RcParameters rc;
    CHECK_THROWS_AS(build_thermal_model(rc, 30.0), DiscretizationError);
    CHECK_THROWS_WITH_AS(build_thermal_model(rc, 30.0), doctest::Contains("discretization-too-coarse"),
                         DiscretizationError);
    CHECK_THROWS_AS(build_thermal_model(rc, 0.0), InvalidArgument);
}

TEST_CASE("step is A x + B u")
{
    ThermalModel m;
    const ThermalState s{21.0, 19.0, 8.0};
    CHECK(step(m, s, {30.0, 500.0, 20.0}) == s);

    m.a_matrix.setZero();
    m.b_matrix.setZero();
    m.b_matrix.col(0).setOnes();
    CHECK(step(m, s, {12.5, 0.0, 0.0}) == ThermalState::uniform(12.5));

    m.a_matrix << 0.9, 0.05, 0.02, 0.1, 0.85, 0.0, 0.03, 0.0, 0.8;
    m.b_matrix << 0.01, 0.0002, 0.04, 0.0, 0.0003, 0.0, 0.05, 0.0, 0.0;
    const ThermalInput in{5.0, 400.0, 20.0};
    const auto out = step(m, s, in);
    CHECK(out.t_in_c == doctest::Approx(0.9 * 21 + 0.05 * 19 + 0.02 * 8 + 0.01 * 5 + 0.0002 * 400 + 0.04 * 20));
    CHECK(out.t_mass_c == doctest::Approx(0.1 * 21 + 0.85 * 19 + 0.0003 * 400));
    CHECK(out.t_env_c == doctest::Approx(0.03 * 21 + 0.8 * 8 + 0.05 * 5));
}

TEST_CASE("step is affine-linear")
{
    const auto m = model_of(RcParameters{}, 0.25);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int k = 0; k < 100; ++k) {
        const ThermalState s1{u(rng), u(rng), u(rng)};
        const ThermalState s2{u(rng), u(rng), u(rng)};
        const ThermalInput i1{u(rng), 10 * u(rng), u(rng)};
        const ThermalInput i2{u(rng), 10 * u(rng), u(rng)};
        const auto sum = step(m, ThermalState::from(s1.vec() + s2.vec()),
                              {i1.ambient_c + i2.ambient_c, i1.irradiance_wm2 + i2.irradiance_wm2,
                               i1.hvac_thermal_kw + i2.hvac_thermal_kw});
        const Vector3 parts = step(m, s1, i1).vec() + step(m, s2, i2).vec() - step(m, {}, {}).vec();
        CHECK((sum.vec() - parts).cwiseAbs().maxCoeff() <= 1e-11);
    }
}

TEST_CASE("HVAC thermal injection")
{
    ThermalModel m;
    m.hvac_rated_power_kw = 5.0;
    m.cop = 4.0;
    CHECK(m.hvac_thermal_kw() == 20.0);
    CHECK(hvac_input_kw(m, true, false) == 20.0);
    CHECK(hvac_input_kw(m, false, true) == -20.0);
    CHECK(hvac_input_kw(m, false, false) == 0.0);
}

TEST_CASE("hysteresis stays off inside the band")
{
    auto h = fixtures::house(96);
    auto day = fixtures::flat_day(96, "spring", 21.0);
    // Ambient at the set point: the house drifts nowhere.
    const auto run = simulate_simple_control(h.thermal, day, 0, ThermalState::uniform(21.0), HvacMode::heat);
    CHECK(std::all_of(run.on.begin(), run.on.end(), [](int v) { return v == 0; }));
    REQUIRE(run.states.size() == 97);
}

TEST_CASE("cooling under constant heat holds the ceiling")
{
    auto h = fixtures::house(96);
    auto day = fixtures::flat_day(96, "summer", 35.0);
    const auto run = simulate_simple_control(h.thermal, day, 0, ThermalState::uniform(21.0), HvacMode::cool);
    const double overshoot = max_indoor_step(run);
    bool crossed = false;
    for (const auto& s : run.states) {
        crossed = crossed || s.t_in_c > 23.0;
        if (crossed) {
            CHECK(s.t_in_c <= 23.0 + overshoot + 1e-12);
            CHECK(s.t_in_c >= 19.0 - overshoot - 1e-12);
        }
    }
    CHECK(crossed);
    CHECK(std::count(run.on.begin(), run.on.end(), 1) > 0);
}

TEST_CASE("hysteresis switching rule")
{
    auto h = fixtures::house(96);
    auto day = fixtures::flat_day(96, "winter", 0.0);
    const auto run = simulate_simple_control(h.thermal, day, 0, ThermalState::uniform(21.0), HvacMode::heat);
    int on = 0;
    for (int t = 0; t < 96; ++t) {
        const double tin = run.states[t].t_in_c;
        if (tin < 19.0) {
            CHECK(run.on[t] == 1);
        } else if (tin >= 23.0) {
            CHECK(run.on[t] == 0);
        } else {
            CHECK(run.on[t] == on);  // inside the band the previous decision holds
        }
        on = run.on[t];
    }
    CHECK(run.mode == HvacMode::heat);
}

TEST_CASE("schedules replay exactly")
{
    auto h = fixtures::house(96);
    auto day = fixtures::flat_day(96, "winter", 2.0);
    const auto init = ThermalState::uniform(21.0);
    const auto run = simulate_simple_control(h.thermal, day, 0, init, HvacMode::heat);
    const auto replay = simulate_schedule(h.thermal, day, init, run.on, HvacMode::heat);
    CHECK(replay.states == run.states);
}

TEST_CASE("season decides the thermostat mode")
{
    Series desired(96, 21.0);
    CHECK(season_mode(fixtures::flat_day(96, "winter", 30.0), desired) == HvacMode::heat);
    CHECK(season_mode(fixtures::flat_day(96, "summer", 5.0), desired) == HvacMode::cool);
    CHECK(season_mode(fixtures::flat_day(96, "spring", 12.0), desired) == HvacMode::heat);
    CHECK(season_mode(fixtures::flat_day(96, "autumn", 26.0), desired) == HvacMode::cool);
}

TEST_CASE("population perturbation")
{
    auto base = fixtures::house(96);
    SUBCASE("zero spread copies the base")
    {
        const auto houses = perturb_houses(base, 5, 0.0, 11);
        for (const auto& h : houses) {
            CHECK(h.thermal == base.thermal);
            CHECK(*h.rc == *base.rc);
        }
    }
    SUBCASE("deterministic per seed")
    {
        CHECK(perturb_houses(base, 8, 0.1, 5) == perturb_houses(base, 8, 0.1, 5));
        CHECK_FALSE(perturb_houses(base, 8, 0.1, 5) == perturb_houses(base, 8, 0.1, 6));
    }
    SUBCASE("spread of capacitances")
    {
        const auto houses = perturb_houses(base, 20, 0.1, 1);
        const double nominal = base.rc->c_indoor_kwh_per_degc;
        double mean = 0.0;
        for (const auto& h : houses) {
            mean += h.rc->c_indoor_kwh_per_degc / houses.size();
        }
        double var = 0.0;
        for (const auto& h : houses) {
            var += std::pow(h.rc->c_indoor_kwh_per_degc - mean, 2) / (houses.size() - 1);
        }
        CHECK(std::abs(std::sqrt(var) - 0.1 * nominal) <= 0.4 * 0.1 * nominal);
        for (const auto& h : houses) {
            CHECK(spectral_radius(h.thermal.a_matrix) < 1.0);
        }
    }
    SUBCASE("bad arguments")
    {
        CHECK_THROWS_AS(perturb_houses(base, 0, 0.1, 1), InvalidArgument);
        CHECK_THROWS_AS(perturb_houses(base, 3, -0.1, 1), InvalidArgument);
        base.rc.reset();
        CHECK_THROWS_AS(perturb_houses(base, 3, 0.1, 1), InvalidArgument);
    }
    SUBCASE("always unstable draws fail after bounded attempts")
    {
        base.thermal.dt_hours = 200.0;
        CHECK_THROWS_AS(perturb_houses(base, 2, 0.1, 1), DiscretizationError);
    }
}
