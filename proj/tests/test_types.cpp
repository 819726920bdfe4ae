#include "fixtures.hpp"

#include "mgplan/types.hpp"

#include <doctest.h>

#include <cmath>

using namespace mgplan;

namespace {

// Level payment that amortizes a principal of 1 over n years, found by
// bisection on the simulated loan balance (independent of the closed form).
double amortized_payment(double rate, int years)
{
    double lo = 0.0;
    double hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        const double pay = 0.5 * (lo + hi);
        double balance = 1.0;
        for (int y = 0; y < years; ++y) {
            balance = balance * (1.0 + rate) - pay;
        }
        (balance > 0.0 ? lo : hi) = pay;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("annuity factor matches an amortization table")
{
    CHECK(std::abs(annuity_factor(0.05, 10) - 0.1295046) <= 1e-7);
    CHECK(std::abs(annuity_factor(0.05, 10) - amortized_payment(0.05, 10)) <= 1e-12);
    for (double r : {0.01, 0.03, 0.08, 0.12}) {
        for (int n : {1, 5, 20, 30}) {
            CHECK(annuity_factor(r, n) == doctest::Approx(amortized_payment(r, n)).epsilon(1e-10));
        }
    }
}

TEST_CASE("annuity factor edge cases")
{
    CHECK(annuity_factor(0.0, 10) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(annuity_factor(0.05, 1) == doctest::Approx(1.05).epsilon(1e-15));
    CHECK_THROWS_AS(annuity_factor(0.05, 0), InvalidArgument);
    CHECK_THROWS_AS(annuity_factor(0.05, -3), InvalidArgument);
    CHECK_THROWS_AS(annuity_factor(-0.01, 10), InvalidArgument);
}

TEST_CASE("each catalog entry expands into count_limit units")
{
    auto p = fixtures::base_problem(4);
    p.res = {fixtures::wind(4)};
    p.res[0].count_limit = 3;
    p.dfg = {fixtures::diesel()};
    p.ess = {fixtures::es1()};
    p.ess[0].count_limit = 1;
    const auto units = expand_units(p);
    REQUIRE(units.size() == 6);
    CHECK(units[0].unit_class == UnitClass::wind);
    CHECK(units[2].name == "WT#2");
    CHECK(units[3].unit_class == UnitClass::dfg);
    CHECK(units[4].copy == 1);
    CHECK(units[5].name == "ES1#0");

    p.res[0].count_limit = 0;
    CHECK(expand_units(p).size() == 3);
}

TEST_CASE("annualized investment per unit class")
{
    auto p = fixtures::base_problem(4);
    p.res = {fixtures::wind(4)};
    p.ess = {fixtures::es1()};
    const auto units = expand_units(p);
    const double a = annuity_factor(0.05, 10);
    CHECK(annualized_investment(p, units[0]) == doctest::Approx(a * 2700.0 * 120.0));
    CHECK(annualized_investment(p, units[2]) == doctest::Approx(a * (324.0 * 90.0 + 180.0 * 150.0)));
    CHECK(annualized_investment(p, units[0]) == doctest::Approx(0.1295046 * 324000.0).epsilon(1e-6));
    CHECK(annualized_investment(p, units[0]) == doctest::Approx(41959.5).epsilon(1e-6));
    CHECK(annualized_investment(p, units[2]) == doctest::Approx(7273.0).epsilon(1e-5));
}

TEST_CASE("initial thermal state defaults to the desired temperature")
{
    auto p = fixtures::base_problem(4);
    p.houses = {fixtures::house(4)};
    p.houses[0].thermal.desired_temp_c[0][0] = 20.5;
    CHECK(initial_state_for(p, 0, 0) == ThermalState::uniform(20.5));
    p.initial_state = ThermalState{18.0, 19.0, 12.0};
    CHECK(initial_state_for(p, 0, 0) == ThermalState{18.0, 19.0, 12.0});
}

TEST_CASE("cyclic storage level sits mid-band")
{
    const auto e = fixtures::es1();
    CHECK(e.cyclic_soc_kwh() == doctest::Approx(75.0));
}
