#include "mgplan/cli.hpp"

#include "mgplan/scenario_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>

namespace mgplan::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::string& header) : out_(path)
    {
        if (!out_) {
            throw std::runtime_error("cannot write " + path.string());
        }
        out_ << header << '\n';
    }

    template <typename... Args>
    void row(fmt::format_string<Args...> f, Args&&... args)
    {
        out_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
    }

private:
    std::ofstream out_;
};

double capital_cost(const PlanningProblem& p, const InstallUnit& u)
{
    switch (u.unit_class) {
    case UnitClass::wind:
    case UnitClass::pv: {
        const auto& c = p.res[u.catalog_index];
        return c.p_max_kw * c.capital_cost_per_kw;
    }
    case UnitClass::dfg: {
        const auto& c = p.dfg[u.catalog_index];
        return c.p_max_kw * c.capital_cost_per_kw;
    }
    case UnitClass::ess: {
        const auto& c = p.ess[u.catalog_index];
        return c.p_max_kw * c.power_cost_per_kw + c.e_max_kwh * c.energy_cost_per_kwh;
    }
    }
    return 0.0;
}

json costs_json(const CostBreakdown& c)
{
    return {{"investment", c.investment}, {"operation", c.operation()}, {"total", c.total()},
            {"fuel", c.fuel},             {"no_load", c.no_load},       {"startup", c.startup},
            {"energy", c.energy},         {"degradation", c.degradation}, {"discomfort", c.discomfort},
            {"shedding", c.shedding},     {"demand_charge", c.demand_charge}};
}

solver::SolveOptions solve_options(const CommandOptions& o)
{
    solver::SolveOptions s;
    s.rel_gap = o.rel_gap;
    s.time_limit_s = o.time_limit_s > 0.0 ? o.time_limit_s : std::numeric_limits<double>::infinity();
    s.thread_count = 1;
    s.seed = static_cast<std::uint32_t>(o.seed & 0x7fffffffu);
    return s;
}

PlanRun solve_case(const PlanningProblem& base, double budget, ControlMode mode, const CommandOptions& o,
                   const PlanSolution* warm = nullptr)
{
    PlanningProblem p = base;
    p.budget = budget;
    PlanOptions opts;
    opts.mode = mode;
    opts.solve = solve_options(o);
    opts.warm = warm;
    return run_plan(p, opts);
}

std::vector<fs::path> write_case_files(const CaseResult& c, const PlanningProblem& p, const std::string& digest,
                                       const CommandOptions& o)
{
    const auto& run = c.run;
    std::vector<fs::path> files;
    const auto path = [&](const std::string& suffix) {
        files.push_back(o.out / (c.name + suffix));
        return files.back();
    };
    const auto report_path = path("_report.json");

    json report;
    report["schema"] = kReportSchema;
    report["case"] = c.name;
    report["scenario"] = {{"source", o.scenario}, {"digest", digest}, {"seed", o.seed}};
    report["options"] = {{"budget", c.budget},
                         {"mode", to_string(c.mode)},
                         {"rel_gap", o.rel_gap},
                         {"time_limit_s", o.time_limit_s > 0.0 ? json(o.time_limit_s) : json(nullptr)},
                         {"backend", run.outcome.backend},
                         {"applied_rel_gap", run.outcome.applied_rel_gap}};
    report["status"] = solver::to_string(run.outcome.status);
    report["message"] = run.outcome.message;
    report["files"] = json::array();

    if (run.solution) {
        const auto& s = *run.solution;
        report["objective"] = run.outcome.objective;
        report["best_bound"] = run.outcome.best_bound;
        report["relative_gap"] = run.outcome.relative_gap();
        report["costs"] = costs_json(s.costs);
        json installed = json::array();
        for (std::size_t u = 0; u < s.units.size(); ++u) {
            if (s.installed[u]) {
                installed.push_back(s.units[u].name);
            }
        }
        report["installed"] = installed;
        report["installed_count"] = s.installed_count();
        json peaks = json::object();
        for (const auto& [g, v] : s.peaks) {
            peaks[std::to_string(g)] = v;
        }
        report["monthly_peak_kw"] = peaks;
        report["simultaneous_ess_intervals"] = s.simultaneous_ess.size();

        {
            CsvFile f(path("_installations.csv"), "unit,class,catalog_entry,copy,installed,capital_cost,annualized_cost");
            for (std::size_t u = 0; u < s.units.size(); ++u) {
                const auto& unit = s.units[u];
                const std::string entry = unit.name.substr(0, unit.name.find('#'));
                f.row("{},{},{},{},{},{},{}", unit.name, to_string(unit.unit_class), entry, unit.copy,
                      s.installed[u] ? 1 : 0, capital_cost(p, unit), annualized_investment(p, unit));
            }
        }
        {
            CsvFile f(path("_dispatch.csv"), "day,interval,entity,quantity,value");
            for (std::size_t d = 0; d < p.days.size(); ++d) {
                const auto& label = p.days[d].label;
                for (int t = 0; t < p.days[d].interval_count; ++t) {
                    f.row("{},{},pcc,power_kw,{}", label, t, s.pcc[d][t]);
                    for (const auto& r : s.res) {
                        f.row("{},{},{},power_kw,{}", label, t, s.units[r.unit].name, r.power[d][t]);
                    }
                    for (const auto& g : s.dfg) {
                        const auto& n = s.units[g.unit].name;
                        f.row("{},{},{},power_kw,{}", label, t, n, g.power[d][t]);
                        f.row("{},{},{},commit,{}", label, t, n, g.commit[d][t]);
                        f.row("{},{},{},startup,{}", label, t, n, g.startup[d][t]);
                    }
                    for (const auto& e : s.ess) {
                        const auto& n = s.units[e.unit].name;
                        f.row("{},{},{},charge_kw,{}", label, t, n, e.charge[d][t]);
                        f.row("{},{},{},discharge_kw,{}", label, t, n, e.discharge[d][t]);
                        f.row("{},{},{},soc_kwh,{}", label, t, n, e.soc[d][t]);
                    }
                    for (std::size_t h = 0; h < s.houses.size(); ++h) {
                        const auto& tr = s.houses[h];
                        const auto& n = p.houses[h].name;
                        f.row("{},{},{},heat_on,{}", label, t, n, tr.heat_on[d][t]);
                        f.row("{},{},{},cool_on,{}", label, t, n, tr.cool_on[d][t]);
                        f.row("{},{},{},shed_kw,{}", label, t, n, tr.shed[d][t]);
                        f.row("{},{},{},t_in_c,{}", label, t, n, tr.t_in[d][t]);
                    }
                }
            }
        }
        {
            CsvFile f(path("_hvac.csv"),
                      "day,interval,price_per_kwh,ambient_c,house,heat_on,cool_on,t_in_c,t_desired_c");
            for (std::size_t d = 0; d < p.days.size(); ++d) {
                const auto& day = p.days[d];
                for (int t = 0; t < day.interval_count; ++t) {
                    for (std::size_t h = 0; h < s.houses.size(); ++h) {
                        const auto& tr = s.houses[h];
                        f.row("{},{},{},{},{},{},{},{},{}", day.label, t, day.pcc_price_per_kwh[t],
                              day.ambient_temp_c[t], p.houses[h].name, tr.heat_on[d][t], tr.cool_on[d][t],
                              tr.t_in[d][t], p.houses[h].thermal.desired_temp_c[d][t]);
                    }
                }
            }
        }
        {
            CsvFile f(path("_sources.csv"), "day,interval,load_kw,pcc_kw,res_kw,dfg_kw,ess_net_kw");
            const auto load = s.total_load_kw(p);
            for (std::size_t d = 0; d < p.days.size(); ++d) {
                for (int t = 0; t < p.days[d].interval_count; ++t) {
                    double res = 0.0, dfg = 0.0, ess = 0.0;
                    for (const auto& r : s.res) {
                        res += r.power[d][t];
                    }
                    for (const auto& g : s.dfg) {
                        dfg += g.power[d][t];
                    }
                    for (const auto& e : s.ess) {
                        ess += e.discharge[d][t] - e.charge[d][t];
                    }
                    f.row("{},{},{},{},{},{},{}", p.days[d].label, t, load[d][t], s.pcc[d][t], res, dfg, ess);
                }
            }
        }
        {
            CsvFile f(path("_soc.csv"), "day,interval,unit,soc_kwh");
            for (const auto& e : s.ess) {
                if (!s.installed[e.unit]) {
                    continue;
                }
                for (std::size_t d = 0; d < p.days.size(); ++d) {
                    for (int t = 0; t < p.days[d].interval_count; ++t) {
                        f.row("{},{},{},{}", p.days[d].label, t, s.units[e.unit].name, e.soc[d][t]);
                    }
                }
            }
        }
    }
    for (std::size_t k = 1; k < files.size(); ++k) {
        report["files"].push_back(files[k].filename().string());
    }
    std::ofstream(report_path) << report.dump(2) << '\n';
    return files;
}

void write_timing(const CommandResult& r, const CommandOptions& o, CommandResult& out)
{
    const auto path = o.out / "timing.csv";
    CsvFile f(path, "case,wall_time_s");
    for (const auto& c : r.cases) {
        f.row("{},{}", c.name, c.run.outcome.wall_time_s);
    }
    out.files.push_back(path);
}

void print_summary(const CaseResult& c)
{
    const auto& o = c.run.outcome;
    if (c.run.solution) {
        const auto& k = c.run.solution->costs;
        std::cout << fmt::format("{:<24} {:<12} investment {:>12.2f} operation {:>12.2f} total {:>12.2f} gap {:.4f}\n",
                                 c.name, solver::to_string(o.status), k.investment, k.operation(), k.total(),
                                 o.relative_gap());
    } else {
        std::cout << fmt::format("{:<24} {:<12} {}\n", c.name, solver::to_string(o.status), o.message);
    }
}

CaseResult make_case(std::string name, double budget, ControlMode mode, PlanRun run, const fs::path& out)
{
    CaseResult c;
    c.report_path = out / (name + "_report.json");
    c.name = std::move(name);
    c.budget = budget;
    c.mode = mode;
    c.run = std::move(run);
    return c;
}

void finish(CommandResult& r, const LoadedScenario& sc, const CommandOptions& o)
{
    r.exit_code = 0;
    for (const auto& c : r.cases) {
        auto files = write_case_files(c, sc.problem, sc.digest, o);
        r.files.insert(r.files.end(), files.begin(), files.end());
        print_summary(c);
        if (!c.run.outcome.ok()) {
            std::cerr << "mgplan: case " << c.name << " ended " << solver::to_string(c.run.outcome.status)
                      << (c.run.outcome.message.empty() ? "" : ": " + c.run.outcome.message) << '\n';
            r.exit_code = 1;
        }
    }
    write_timing(r, o, r);
}

}  // namespace

LoadedScenario load(const CommandOptions& o)
{
    const auto files = o.scenario == kDefaultScenario ? io::synthesize_default_scenario(o.seed)
                                                      : io::read_file_set(o.scenario);
    return {io::from_file_set(files), io::digest(files)};
}

CommandResult cmd_solve(const CommandOptions& o)
{
    auto sc = load(o);
    fs::create_directories(o.out);
    const double budget = o.budget.value_or(sc.problem.budget);
    CommandResult r;
    const std::string name = fmt::format("solve_{}", to_string(o.mode));
    r.cases.push_back(make_case(name, budget, o.mode, solve_case(sc.problem, budget, o.mode, o), o.out));
    finish(r, sc, o);
    return r;
}

CommandResult cmd_compare_control(const CommandOptions& o)
{
    auto sc = load(o);
    fs::create_directories(o.out);
    const double budget = o.budget.value_or(sc.problem.budget);
    CommandResult r;
    auto simple = solve_case(sc.problem, budget, ControlMode::simple, o);
    const PlanSolution* warm = simple.solution ? &*simple.solution : nullptr;
    auto surrogate = solve_case(sc.problem, budget, ControlMode::surrogate, o, warm);
    r.cases.push_back(make_case("compare_simple", budget, ControlMode::simple, std::move(simple), o.out));
    r.cases.push_back(make_case("compare_surrogate", budget, ControlMode::surrogate, std::move(surrogate), o.out));
    finish(r, sc, o);

    const auto& a = r.cases[0].run.solution;
    const auto& b = r.cases[1].run.solution;
    if (a && b) {
        const auto p = o.out / "compare_costs.csv";
        CsvFile f(p, "component,simple,surrogate");
        const json ja = costs_json(a->costs);
        const json jb = costs_json(b->costs);
        for (const auto& [k, v] : ja.items()) {
            f.row("{},{},{}", k, v.get<double>(), jb.at(k).get<double>());
        }
        const auto q = o.out / "compare_total_load.csv";
        CsvFile g(q, "day,interval,simple_kw,surrogate_kw");
        const auto la = a->total_load_kw(sc.problem);
        const auto lb = b->total_load_kw(sc.problem);
        for (std::size_t d = 0; d < sc.problem.days.size(); ++d) {
            for (std::size_t t = 0; t < la[d].size(); ++t) {
                g.row("{},{},{},{}", sc.problem.days[d].label, t, la[d][t], lb[d][t]);
            }
        }
        r.files.push_back(p);
        r.files.push_back(q);
    }
    return r;
}

CommandResult cmd_sweep_budget(const CommandOptions& o)
{
    auto sc = load(o);
    fs::create_directories(o.out);
    auto budgets = o.budgets;
    if (budgets.empty()) {
        throw InvalidArgument("sweep needs at least one budget");
    }
    std::sort(budgets.begin(), budgets.end());
    budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

    std::vector<PlanRun> runs(budgets.size());
    if (o.jobs <= 1) {
        // A plan for a smaller budget stays feasible for a larger one.
        const PlanSolution* warm = nullptr;
        for (std::size_t k = 0; k < budgets.size(); ++k) {
            runs[k] = solve_case(sc.problem, budgets[k], o.mode, o, warm);
            warm = runs[k].solution ? &*runs[k].solution : warm;
        }
    } else {
        std::size_t next = 0;
        while (next < budgets.size()) {
            std::vector<std::future<PlanRun>> batch;
            for (int j = 0; j < o.jobs && next < budgets.size(); ++j, ++next) {
                batch.push_back(std::async(std::launch::async, [&, k = next] {
                    return solve_case(sc.problem, budgets[k], o.mode, o);
                }));
            }
            const std::size_t first = next - batch.size();
            for (std::size_t j = 0; j < batch.size(); ++j) {
                runs[first + j] = batch[j].get();
            }
        }
    }

    CommandResult r;
    for (std::size_t k = 0; k < budgets.size(); ++k) {
        r.cases.push_back(make_case(fmt::format("sweep_{}", k), budgets[k], o.mode, std::move(runs[k]), o.out));
    }
    finish(r, sc, o);

    const auto p = o.out / "sweep.csv";
    CsvFile f(p, "budget,status,investment,operation,total,saving_vs_previous");
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (const auto& c : r.cases) {
        if (!c.run.solution) {
            f.row("{},{},,,,", c.budget, solver::to_string(c.run.outcome.status));
            continue;
        }
        const auto& k = c.run.solution->costs;
        const double saving = std::isnan(previous) ? 0.0 : previous - k.total();
        f.row("{},{},{},{},{},{}", c.budget, solver::to_string(c.run.outcome.status), k.investment, k.operation(),
              k.total(), saving);
        previous = k.total();
    }
    r.files.push_back(p);
    return r;
}

void cmd_synthesize(const CommandOptions& o)
{
    io::write_file_set(io::synthesize_default_scenario(o.seed), o.out);
}

int run(int argc, char** argv)
{
    CLI::App app{"Community microgrid planning with building thermal dynamics"};
    app.require_subcommand(1);
    CommandOptions o;
    std::string mode = "surrogate";

    const auto common = [&](CLI::App* sub, bool with_mode) {
        sub->add_option("--scenario", o.scenario, "Scenario directory, or 'default' for the synthesized study")
            ->capture_default_str();
        sub->add_option("--gap", o.rel_gap, "Relative MIP gap")->capture_default_str()->check(CLI::Range(0.0, 1.0));
        sub->add_option("--time-limit", o.time_limit_s, "Solver time limit per solve in seconds (0 = none)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", o.seed, "Seed for scenario synthesis and the solver")->capture_default_str();
        sub->add_option("--out", o.out, "Output directory")->capture_default_str();
        if (with_mode) {
            sub->add_option("--mode", mode, "HVAC control: surrogate or simple")
                ->check(CLI::IsMember({"surrogate", "simple"}))
                ->capture_default_str();
        }
    };

    auto* solve = app.add_subcommand("solve", "Run one planning case");
    common(solve, true);
    solve->add_option("--budget", o.budget, "Investment budget (overrides the scenario)");

    auto* compare = app.add_subcommand("compare", "Simple vs surrogate HVAC control on identical data");
    common(compare, false);
    compare->add_option("--budget", o.budget, "Investment budget (overrides the scenario)");

    auto* sweep = app.add_subcommand("sweep", "Solve once per budget");
    common(sweep, true);
    sweep->add_option("--budget", o.budgets, "Budgets to solve")->required()->expected(1, -1);
    sweep->add_option("--jobs", o.jobs, "Concurrent solves")->capture_default_str()->check(CLI::PositiveNumber);

    auto* synth = app.add_subcommand("synthesize", "Write the default scenario files");
    synth->add_option("--seed", o.seed, "Seed")->capture_default_str();
    synth->add_option("--out", o.out, "Scenario directory to create")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        o.mode = parse_control_mode(mode);
        if (*synth) {
            cmd_synthesize(o);
            return 0;
        }
        if (*solve) {
            return cmd_solve(o).exit_code;
        }
        if (*compare) {
            return cmd_compare_control(o).exit_code;
        }
        return cmd_sweep_budget(o).exit_code;
    } catch (const io::ScenarioError& e) {
        std::cerr << "mgplan: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "mgplan: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace mgplan::cli
