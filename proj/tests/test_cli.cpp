#include "fixtures.hpp"

#include "mgplan/cli.hpp"
#include "mgplan/scenario_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mgplan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("mgplan-cli-" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// A quick scenario: two houses, one 24-interval day, small catalogs.
fs::path small_scenario(const std::string& name)
{
    auto p = fixtures::base_problem(24, 1);
    p.days[0].label = "summer";
    p.days[0].ambient_temp_c.assign(24, 30.0);
    for (int t = 0; t < 24; ++t) {
        p.days[0].pcc_price_per_kwh[t] = t >= 14 && t < 18 ? 0.5 : 0.08;
    }
    p.houses = {fixtures::house(24, 1, 6.0, "a"), fixtures::house(24, 1, 4.0, "b")};
    p.dfg = {fixtures::diesel()};
    p.dfg[0].count_limit = 1;
    p.ess = {fixtures::es1()};
    p.ess[0].count_limit = 1;
    p.budget = 8000.0;
    const auto dir = scratch(name);
    io::save_scenario(p, dir);
    return dir;
}

int run_exe(const std::string& args)
{
    const std::string cmd = std::string(MGPLAN_EXE) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("solve writes a report whose breakdown sums to the objective")
{
    cli::CommandOptions o;
    o.scenario = small_scenario("solve").string();
    o.out = scratch("solve-out");
    o.budget = 0.0;
    const auto r = cli::cmd_solve(o);
    CHECK(r.exit_code == 0);
    const auto report = nlohmann::json::parse(slurp(r.cases[0].report_path));
    CHECK(report["schema"] == "mgplan-report/1");
    CHECK(report["status"] == "optimal");
    CHECK(report["installed_count"] == 0);
    CHECK(report["costs"]["investment"] == 0.0);
    const auto& c = report["costs"];
    double sum = 0.0;
    for (const char* k : {"investment", "fuel", "no_load", "startup", "energy", "degradation", "discomfort",
                          "shedding", "demand_charge"}) {
        sum += c[k].get<double>();
    }
    CHECK(sum == doctest::Approx(report["objective"].get<double>()).epsilon(1e-6));
    for (const auto& f : report["files"]) {
        CHECK(fs::exists(o.out / f.get<std::string>()));
    }
    CHECK(report["options"]["rel_gap"] == 0.005);
    CHECK(report["options"]["applied_rel_gap"] == 0.005);
}

TEST_CASE("identical invocations give identical reports")
{
    cli::CommandOptions o;
    o.scenario = small_scenario("repeat").string();
    const auto first = scratch("repeat-a");
    o.out = first;
    const auto a = cli::cmd_solve(o);
    o.out = scratch("repeat-b");
    const auto b = cli::cmd_solve(o);
    CHECK(slurp(a.cases[0].report_path) == slurp(b.cases[0].report_path));
    CHECK(slurp(o.out / "solve_surrogate_dispatch.csv") == slurp(first / "solve_surrogate_dispatch.csv"));
}

TEST_CASE("digest follows input files")
{
    const auto dir = small_scenario("digest");
    cli::CommandOptions o;
    o.scenario = dir.string();
    const auto first = cli::load(o).digest;
    CHECK(cli::load(o).digest == first);
    auto text = slurp(dir / "days/summer.csv");
    const auto digit = text.find_last_of("0123456789");
    text[digit] = text[digit] == '1' ? '2' : '1';
    std::ofstream(dir / "days/summer.csv") << text;
    CHECK(cli::load(o).digest != first);
}

TEST_CASE("compare runs both strategies on the same investments")
{
    cli::CommandOptions o;
    o.scenario = small_scenario("compare").string();
    o.out = scratch("compare-out");
    const auto r = cli::cmd_compare_control(o);
    REQUIRE(r.cases.size() == 2);
    CHECK(r.exit_code == 0);
    const auto a = nlohmann::json::parse(slurp(r.cases[0].report_path));
    const auto b = nlohmann::json::parse(slurp(r.cases[1].report_path));
    CHECK(a["options"]["budget"] == b["options"]["budget"]);
    CHECK(a["scenario"]["digest"] == b["scenario"]["digest"]);
    CHECK(b["costs"]["total"].get<double>() <=
          a["costs"]["total"].get<double>() * (1.0 + 2 * solver::kDefaultRelGap));
    CHECK(fs::exists(o.out / "compare_costs.csv"));
    CHECK(fs::exists(o.out / "compare_total_load.csv"));
}

TEST_CASE("sweep rows are non-increasing and the zero row matches solve")
{
    cli::CommandOptions o;
    o.scenario = small_scenario("sweep").string();
    o.out = scratch("sweep-out");
    o.budgets = {8000.0, 0.0, 4000.0};
    const auto r = cli::cmd_sweep_budget(o);
    CHECK(r.exit_code == 0);
    REQUIRE(r.cases.size() == 3);
    CHECK(r.cases[0].budget == 0.0);
    for (std::size_t k = 1; k < r.cases.size(); ++k) {
        CHECK(r.cases[k].run.solution->costs.total() <=
              r.cases[k - 1].run.solution->costs.total() * (1.0 + 2 * solver::kDefaultRelGap));
    }
    o.budget = 0.0;
    o.out = scratch("sweep-zero");
    const auto zero = cli::cmd_solve(o);
    CHECK(zero.cases[0].run.solution->costs.total() ==
          doctest::Approx(r.cases[0].run.solution->costs.total()).epsilon(1e-9));

    o.jobs = 2;
    o.out = scratch("sweep-par");
    const auto par = cli::cmd_sweep_budget(o);
    CHECK(par.exit_code == 0);
    CHECK(slurp(o.out / "sweep.csv").find("budget,status,investment") == 0);
}

TEST_CASE("executable exit codes")
{
    const auto dir = small_scenario("exe");
    const auto out = scratch("exe-out");
    CHECK(run_exe("solve --scenario " + dir.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "solve_surrogate_report.json"));
    CHECK(run_exe("solve --scenario " + scratch("nowhere").string() + " --out " + out.string()) != 0);
    CHECK(run_exe("solve --mode sideways") != 0);
    // A budget-zero plan with an impossible grid limit is infeasible.
    auto p = io::load_scenario(dir);
    p.pcc_limit_kw = 1.0;
    const auto tight = scratch("exe-tight");
    io::save_scenario(p, tight);
    CHECK(run_exe("solve --budget 0 --scenario " + tight.string() + " --out " + out.string()) == 1);
    const auto synth = scratch("exe-synth");
    CHECK(run_exe("synthesize --seed 4 --out " + synth.string()) == 0);
    CHECK(io::read_file_set(synth) == io::synthesize_default_scenario(4));
}
