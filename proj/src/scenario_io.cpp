#include "mgplan/scenario_io.hpp"

#include "mgplan/thermal.hpp"
#include "mgplan/validate.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace mgplan::io {

using nlohmann::json;

namespace {

std::string fmt_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string series_path(const RepresentativeDay& day)
{
    return "days/" + day.label + ".csv";
}

bool safe_label(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}

json finance_json(const Financials& f)
{
    return {{"interest_rate", f.interest_rate}, {"lifetime_years", f.lifetime_years}};
}

json matrix_json(const Matrix3& m)
{
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
    }
    return rows;
}

json rc_json(const RcParameters& rc)
{
    return {{"c_indoor_kwh_per_degc", rc.c_indoor_kwh_per_degc},
            {"c_mass_kwh_per_degc", rc.c_mass_kwh_per_degc},
            {"c_envelope_kwh_per_degc", rc.c_envelope_kwh_per_degc},
            {"r_indoor_mass_degc_per_kw", rc.r_indoor_mass_degc_per_kw},
            {"r_indoor_envelope_degc_per_kw", rc.r_indoor_envelope_degc_per_kw},
            {"r_envelope_ambient_degc_per_kw", rc.r_envelope_ambient_degc_per_kw},
            {"r_indoor_ambient_degc_per_kw", rc.r_indoor_ambient_degc_per_kw},
            {"window_area_m2", rc.window_area_m2},
            {"solar_to_mass_fraction", rc.solar_to_mass_fraction}};
}

// Parsing helpers that report the JSON path on failure.
class ConfigReader {
public:
    explicit ConfigReader(std::string file) : file_(std::move(file)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& detail) const
    {
        throw ScenarioError("schema-mismatch", file_, 0, 0, path + ": " + detail);
    }

    const json& member(const json& obj, const std::string& key, const std::string& path) const
    {
        if (!obj.is_object() || !obj.contains(key)) {
            fail(path, "missing key '" + key + "'");
        }
        return obj.at(key);
    }

    double number(const json& obj, const std::string& key, const std::string& path) const
    {
        const auto& v = member(obj, key, path);
        if (!v.is_number()) {
            fail(path + "." + key, "expected a number");
        }
        return v.get<double>();
    }

    int integer(const json& obj, const std::string& key, const std::string& path) const
    {
        const auto& v = member(obj, key, path);
        if (!v.is_number_integer()) {
            fail(path + "." + key, "expected an integer");
        }
        return v.get<int>();
    }

    std::string text(const json& obj, const std::string& key, const std::string& path) const
    {
        const auto& v = member(obj, key, path);
        if (!v.is_string()) {
            fail(path + "." + key, "expected a string");
        }
        return v.get<std::string>();
    }

    const json& array(const json& obj, const std::string& key, const std::string& path) const
    {
        const auto& v = member(obj, key, path);
        if (!v.is_array()) {
            fail(path + "." + key, "expected an array");
        }
        return v;
    }

    Matrix3 matrix(const json& obj, const std::string& key, const std::string& path) const
    {
        const auto& v = array(obj, key, path);
        if (v.size() != 3) {
            fail(path + "." + key, "expected 3 rows");
        }
        Matrix3 m;
        for (int i = 0; i < 3; ++i) {
            if (!v[i].is_array() || v[i].size() != 3) {
                fail(path + "." + key, "expected 3x3 numbers");
            }
            for (int j = 0; j < 3; ++j) {
                if (!v[i][j].is_number()) {
                    fail(path + "." + key, "expected 3x3 numbers");
                }
                m(i, j) = v[i][j].get<double>();
            }
        }
        return m;
    }

    Financials finance(const json& obj, const std::string& key, const std::string& path) const
    {
        const auto& f = member(obj, key, path);
        const auto p = path + "." + key;
        return {number(f, "interest_rate", p), number(f, "lifetime_years", p)};
    }

    RcParameters rc(const json& v, const std::string& p) const
    {
        RcParameters rc;
        rc.c_indoor_kwh_per_degc = number(v, "c_indoor_kwh_per_degc", p);
        rc.c_mass_kwh_per_degc = number(v, "c_mass_kwh_per_degc", p);
        rc.c_envelope_kwh_per_degc = number(v, "c_envelope_kwh_per_degc", p);
        rc.r_indoor_mass_degc_per_kw = number(v, "r_indoor_mass_degc_per_kw", p);
        rc.r_indoor_envelope_degc_per_kw = number(v, "r_indoor_envelope_degc_per_kw", p);
        rc.r_envelope_ambient_degc_per_kw = number(v, "r_envelope_ambient_degc_per_kw", p);
        rc.r_indoor_ambient_degc_per_kw = number(v, "r_indoor_ambient_degc_per_kw", p);
        rc.window_area_m2 = number(v, "window_area_m2", p);
        rc.solar_to_mass_fraction = number(v, "solar_to_mass_fraction", p);
        return rc;
    }

private:
    std::string file_;
};

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::vector<std::string> series_columns(const PlanningProblem& p)
{
    std::vector<std::string> cols{"interval", "ambient_c", "irradiance_wm2", "price_per_kwh"};
    for (const auto& r : p.res) {
        cols.push_back("cf_" + r.name);
    }
    for (const char* prefix : {"load_h", "shed_max_h", "tdes_h", "band_h"}) {
        for (std::size_t h = 0; h < p.houses.size(); ++h) {
            cols.push_back(prefix + std::to_string(h));
        }
    }
    return cols;
}

std::string locate_file(const PlanningProblem& p, const Violation& v)
{
    for (const auto& d : p.days) {
        if (v.where.find("day " + d.label) != std::string::npos) {
            return series_path(d);
        }
    }
    return kConfigFile;
}

}  // namespace

ScenarioError::ScenarioError(std::string kind, std::string file, int row, int column, const std::string& detail)
    : std::runtime_error(kind + ": " + file + (row > 0 ? ":" + std::to_string(row) : "") +
                         (column > 0 ? ":" + std::to_string(column) : "") + ": " + detail),
      kind_(std::move(kind)),
      file_(std::move(file)),
      row_(row),
      column_(column)
{
}

ScenarioFileSet to_file_set(const PlanningProblem& p)
{
    json cfg;
    cfg["schema"] = kScenarioSchema;
    cfg["pcc_limit_kw"] = p.pcc_limit_kw;
    cfg["budget"] = p.budget;
    cfg["pi1"] = p.pi1;
    cfg["pi2"] = p.pi2;
    cfg["mip_rel_gap"] = p.mip_rel_gap;
    cfg["finance"] = {{"wind", finance_json(p.wind_finance)},
                      {"pv", finance_json(p.pv_finance)},
                      {"dfg", finance_json(p.dfg_finance)},
                      {"ess", finance_json(p.ess_finance)}};
    cfg["initial_state"] = p.initial_state
                               ? json{p.initial_state->t_in_c, p.initial_state->t_mass_c, p.initial_state->t_env_c}
                               : json(nullptr);

    cfg["days"] = json::array();
    for (const auto& d : p.days) {
        if (!safe_label(d.label)) {
            throw InvalidArgument("day label '" + d.label + "' is not usable as a file name");
        }
        cfg["days"].push_back({{"label", d.label},
                               {"month_group", d.month_group},
                               {"weight_days", d.weight_days},
                               {"interval_count", d.interval_count},
                               {"dt_hours", d.dt_hours},
                               {"demand_charge_per_kw", d.demand_charge_per_kw},
                               {"series", series_path(d)}});
    }
    cfg["houses"] = json::array();
    for (const auto& h : p.houses) {
        cfg["houses"].push_back({{"name", h.name},
                                 {"dt_hours", h.thermal.dt_hours},
                                 {"a_matrix", matrix_json(h.thermal.a_matrix)},
                                 {"b_matrix", matrix_json(h.thermal.b_matrix)},
                                 {"hvac_rated_power_kw", h.thermal.hvac_rated_power_kw},
                                 {"cop", h.thermal.cop},
                                 {"discomfort_cost_per_degc", h.thermal.discomfort_cost_per_degc},
                                 {"shed_penalty_per_kwh", h.shed_penalty_per_kwh},
                                 {"rc", h.rc ? rc_json(*h.rc) : json(nullptr)}});
    }
    cfg["dfg"] = json::array();
    for (const auto& g : p.dfg) {
        json blocks = json::array();
        for (const auto& b : g.blocks) {
            blocks.push_back({{"marginal_cost_per_kwh", b.marginal_cost_per_kwh}, {"width_kw", b.width_kw}});
        }
        cfg["dfg"].push_back({{"name", g.name},
                              {"p_min_kw", g.p_min_kw},
                              {"p_max_kw", g.p_max_kw},
                              {"blocks", blocks},
                              {"no_load_cost_per_h", g.no_load_cost_per_h},
                              {"startup_cost", g.startup_cost},
                              {"capital_cost_per_kw", g.capital_cost_per_kw},
                              {"count_limit", g.count_limit}});
    }
    cfg["res"] = json::array();
    for (const auto& r : p.res) {
        if (r.name.find(',') != std::string::npos) {
            throw InvalidArgument("renewable name '" + r.name + "' may not contain a comma");
        }
        cfg["res"].push_back({{"name", r.name},
                              {"kind", to_string(r.kind)},
                              {"p_max_kw", r.p_max_kw},
                              {"capital_cost_per_kw", r.capital_cost_per_kw},
                              {"count_limit", r.count_limit}});
    }
    cfg["ess"] = json::array();
    for (const auto& e : p.ess) {
        cfg["ess"].push_back({{"name", e.name},
                              {"p_max_kw", e.p_max_kw},
                              {"e_max_kwh", e.e_max_kwh},
                              {"soc_min_frac", e.soc_min_frac},
                              {"soc_max_frac", e.soc_max_frac},
                              {"eta_charge", e.eta_charge},
                              {"eta_discharge", e.eta_discharge},
                              {"power_cost_per_kw", e.power_cost_per_kw},
                              {"energy_cost_per_kwh", e.energy_cost_per_kwh},
                              {"degradation_cost_per_kwh", e.degradation_cost_per_kwh},
                              {"count_limit", e.count_limit}});
    }

    ScenarioFileSet out;
    out.files[kConfigFile] = cfg.dump(2) + "\n";

    const auto cols = series_columns(p);
    for (std::size_t d = 0; d < p.days.size(); ++d) {
        const auto& day = p.days[d];
        std::ostringstream csv;
        csv << kSeriesSchema << "\n";
        for (std::size_t c = 0; c < cols.size(); ++c) {
            csv << (c ? "," : "") << cols[c];
        }
        csv << "\n";
        for (int t = 0; t < day.interval_count; ++t) {
            csv << t << ',' << fmt_double(day.ambient_temp_c.at(t)) << ',' << fmt_double(day.irradiance_wm2.at(t))
                << ',' << fmt_double(day.pcc_price_per_kwh.at(t));
            for (const auto& r : p.res) {
                csv << ',' << fmt_double(r.capacity_factor.at(d).at(t));
            }
            for (const auto& h : p.houses) {
                csv << ',' << fmt_double(h.non_hvac_load_kw.at(d).at(t));
            }
            for (const auto& h : p.houses) {
                csv << ',' << fmt_double(h.max_shed_kw.at(d).at(t));
            }
            for (const auto& h : p.houses) {
                csv << ',' << fmt_double(h.thermal.desired_temp_c.at(d).at(t));
            }
            for (const auto& h : p.houses) {
                csv << ',' << fmt_double(h.thermal.band_halfwidth_c.at(d).at(t));
            }
            csv << "\n";
        }
        out.files[series_path(day)] = csv.str();
    }
    return out;
}

PlanningProblem from_file_set(const ScenarioFileSet& files)
{
    const auto cfg_it = files.files.find(kConfigFile);
    if (cfg_it == files.files.end()) {
        throw ScenarioError("missing-file", kConfigFile, 0, 0, "scenario config not found");
    }
    json cfg;
    try {
        cfg = json::parse(cfg_it->second);
    } catch (const json::parse_error& e) {
        throw ScenarioError("schema-mismatch", kConfigFile, 0, 0, e.what());
    }
    ConfigReader r(kConfigFile);
    if (!cfg.is_object() || cfg.value("schema", "") != kScenarioSchema) {
        r.fail("schema", std::string("expected '") + kScenarioSchema + "'");
    }

    PlanningProblem p;
    p.pcc_limit_kw = r.number(cfg, "pcc_limit_kw", "$");
    p.budget = r.number(cfg, "budget", "$");
    p.pi1 = r.number(cfg, "pi1", "$");
    p.pi2 = r.number(cfg, "pi2", "$");
    p.mip_rel_gap = r.number(cfg, "mip_rel_gap", "$");
    const auto& fin = r.member(cfg, "finance", "$");
    p.wind_finance = r.finance(fin, "wind", "$.finance");
    p.pv_finance = r.finance(fin, "pv", "$.finance");
    p.dfg_finance = r.finance(fin, "dfg", "$.finance");
    p.ess_finance = r.finance(fin, "ess", "$.finance");
    if (cfg.contains("initial_state") && !cfg["initial_state"].is_null()) {
        const auto& s = cfg["initial_state"];
        if (!s.is_array() || s.size() != 3 || !s[0].is_number() || !s[1].is_number() || !s[2].is_number()) {
            r.fail("$.initial_state", "expected null or three numbers");
        }
        p.initial_state = ThermalState{s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
    }

    std::vector<std::string> day_files;
    const auto& days = r.array(cfg, "days", "$");
    for (std::size_t i = 0; i < days.size(); ++i) {
        const auto path = "$.days[" + std::to_string(i) + "]";
        RepresentativeDay d;
        d.label = r.text(days[i], "label", path);
        d.month_group = r.integer(days[i], "month_group", path);
        d.weight_days = r.number(days[i], "weight_days", path);
        d.interval_count = r.integer(days[i], "interval_count", path);
        d.dt_hours = r.number(days[i], "dt_hours", path);
        d.demand_charge_per_kw = r.number(days[i], "demand_charge_per_kw", path);
        day_files.push_back(r.text(days[i], "series", path));
        if (d.interval_count < 0) {
            r.fail(path + ".interval_count", "must be non-negative");
        }
        p.days.push_back(std::move(d));
    }

    const auto& houses = r.array(cfg, "houses", "$");
    for (std::size_t i = 0; i < houses.size(); ++i) {
        const auto path = "$.houses[" + std::to_string(i) + "]";
        const auto& v = houses[i];
        HouseProfile h;
        h.name = r.text(v, "name", path);
        h.thermal.dt_hours = r.number(v, "dt_hours", path);
        h.thermal.a_matrix = r.matrix(v, "a_matrix", path);
        h.thermal.b_matrix = r.matrix(v, "b_matrix", path);
        h.thermal.hvac_rated_power_kw = r.number(v, "hvac_rated_power_kw", path);
        h.thermal.cop = r.number(v, "cop", path);
        h.thermal.discomfort_cost_per_degc = r.number(v, "discomfort_cost_per_degc", path);
        h.shed_penalty_per_kwh = r.number(v, "shed_penalty_per_kwh", path);
        if (v.contains("rc") && !v["rc"].is_null()) {
            h.rc = r.rc(v["rc"], path + ".rc");
        }
        p.houses.push_back(std::move(h));
    }

    for (const auto& v : r.array(cfg, "dfg", "$")) {
        const auto path = "$.dfg[" + std::to_string(p.dfg.size()) + "]";
        DfgCandidate g;
        g.name = r.text(v, "name", path);
        g.p_min_kw = r.number(v, "p_min_kw", path);
        g.p_max_kw = r.number(v, "p_max_kw", path);
        for (const auto& b : r.array(v, "blocks", path)) {
            g.blocks.push_back({r.number(b, "marginal_cost_per_kwh", path + ".blocks"),
                                r.number(b, "width_kw", path + ".blocks")});
        }
        g.no_load_cost_per_h = r.number(v, "no_load_cost_per_h", path);
        g.startup_cost = r.number(v, "startup_cost", path);
        g.capital_cost_per_kw = r.number(v, "capital_cost_per_kw", path);
        g.count_limit = r.integer(v, "count_limit", path);
        p.dfg.push_back(std::move(g));
    }
    for (const auto& v : r.array(cfg, "res", "$")) {
        const auto path = "$.res[" + std::to_string(p.res.size()) + "]";
        ResCandidate c;
        c.name = r.text(v, "name", path);
        const auto kind = r.text(v, "kind", path);
        if (kind != "wind" && kind != "pv") {
            r.fail(path + ".kind", "expected 'wind' or 'pv'");
        }
        c.kind = kind == "wind" ? ResKind::wind : ResKind::pv;
        c.p_max_kw = r.number(v, "p_max_kw", path);
        c.capital_cost_per_kw = r.number(v, "capital_cost_per_kw", path);
        c.count_limit = r.integer(v, "count_limit", path);
        p.res.push_back(std::move(c));
    }
    for (const auto& v : r.array(cfg, "ess", "$")) {
        const auto path = "$.ess[" + std::to_string(p.ess.size()) + "]";
        EssCandidate e;
        e.name = r.text(v, "name", path);
        e.p_max_kw = r.number(v, "p_max_kw", path);
        e.e_max_kwh = r.number(v, "e_max_kwh", path);
        e.soc_min_frac = r.number(v, "soc_min_frac", path);
        e.soc_max_frac = r.number(v, "soc_max_frac", path);
        e.eta_charge = r.number(v, "eta_charge", path);
        e.eta_discharge = r.number(v, "eta_discharge", path);
        e.power_cost_per_kw = r.number(v, "power_cost_per_kw", path);
        e.energy_cost_per_kwh = r.number(v, "energy_cost_per_kwh", path);
        e.degradation_cost_per_kwh = v.contains("degradation_cost_per_kwh")
                                         ? r.number(v, "degradation_cost_per_kwh", path)
                                         : kDefaultDegradationCost;
        e.count_limit = r.integer(v, "count_limit", path);
        p.ess.push_back(std::move(e));
    }

    for (auto& h : p.houses) {
        h.non_hvac_load_kw.resize(p.days.size());
        h.max_shed_kw.resize(p.days.size());
        h.thermal.desired_temp_c.resize(p.days.size());
        h.thermal.band_halfwidth_c.resize(p.days.size());
    }
    for (auto& c : p.res) {
        c.capacity_factor.resize(p.days.size());
    }

    const auto expected = series_columns(p);
    for (std::size_t d = 0; d < p.days.size(); ++d) {
        auto& day = p.days[d];
        const auto& file = day_files[d];
        const auto it = files.files.find(file);
        if (it == files.files.end()) {
            throw ScenarioError("missing-file", file, 0, 0, "series file for day '" + day.label + "' not found");
        }
        std::istringstream in(it->second);
        std::string line;
        int row = 1;
        if (!std::getline(in, line) || line != kSeriesSchema) {
            throw ScenarioError("schema-mismatch", file, 1, 0, std::string("expected header '") + kSeriesSchema + "'");
        }
        ++row;
        if (!std::getline(in, line)) {
            throw ScenarioError("schema-mismatch", file, row, 0, "missing column header");
        }
        const auto header = split_csv(line);
        for (std::size_t c = 0; c < std::max(header.size(), expected.size()); ++c) {
            if (c >= header.size() || c >= expected.size() || header[c] != expected[c]) {
                throw ScenarioError("schema-mismatch", file, row, static_cast<int>(c) + 1,
                                    "expected column '" + (c < expected.size() ? expected[c] : std::string("<none>")) +
                                        "', found '" + (c < header.size() ? header[c] : std::string("<none>")) + "'");
            }
        }
        const std::size_t nh = p.houses.size();
        const std::size_t nr = p.res.size();
        int t = 0;
        while (std::getline(in, line)) {
            ++row;
            if (line.empty()) {
                continue;
            }
            const auto cells = split_csv(line);
            if (cells.size() != expected.size()) {
                throw ScenarioError("schema-mismatch", file, row, 0,
                                    "expected " + std::to_string(expected.size()) + " columns, got " +
                                        std::to_string(cells.size()));
            }
            std::vector<double> v(cells.size());
            for (std::size_t c = 0; c < cells.size(); ++c) {
                const auto& s = cells[c];
                const auto res = std::from_chars(s.data(), s.data() + s.size(), v[c]);
                if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
                    throw ScenarioError("schema-mismatch", file, row, static_cast<int>(c) + 1,
                                        "'" + s + "' is not a number");
                }
            }
            if (v[0] != static_cast<double>(t)) {
                throw ScenarioError("schema-mismatch", file, row, 1,
                                    "intervals must be contiguous from 0; expected " + std::to_string(t));
            }
            if (t >= day.interval_count) {
                throw ScenarioError("schema-mismatch", file, row, 0,
                                    "more rows than interval_count " + std::to_string(day.interval_count));
            }
            day.ambient_temp_c.push_back(v[1]);
            day.irradiance_wm2.push_back(v[2]);
            day.pcc_price_per_kwh.push_back(v[3]);
            std::size_t c = 4;
            for (std::size_t k = 0; k < nr; ++k) {
                p.res[k].capacity_factor[d].push_back(v[c++]);
            }
            for (std::size_t h = 0; h < nh; ++h) {
                p.houses[h].non_hvac_load_kw[d].push_back(v[c++]);
            }
            for (std::size_t h = 0; h < nh; ++h) {
                p.houses[h].max_shed_kw[d].push_back(v[c++]);
            }
            for (std::size_t h = 0; h < nh; ++h) {
                p.houses[h].thermal.desired_temp_c[d].push_back(v[c++]);
            }
            for (std::size_t h = 0; h < nh; ++h) {
                p.houses[h].thermal.band_halfwidth_c[d].push_back(v[c++]);
            }
            ++t;
        }
        if (t != day.interval_count) {
            throw ScenarioError("schema-mismatch", file, row + 1, 0,
                                "series truncated: " + std::to_string(t) + " of " +
                                    std::to_string(day.interval_count) + " intervals present");
        }
    }

    const auto violations = validate_problem(p);
    if (!violations.empty()) {
        throw ScenarioError("validation-failure", locate_file(p, violations.front()), 0, 0, describe(violations));
    }
    return p;
}

void write_file_set(const ScenarioFileSet& files, const std::filesystem::path& root)
{
    for (const auto& [rel, content] : files.files) {
        const auto path = root / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        out << content;
    }
}

namespace {

std::string slurp(const std::filesystem::path& path, const std::string& rel)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioError("missing-file", rel, 0, 0, "cannot open " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

ScenarioFileSet read_file_set(const std::filesystem::path& root)
{
    ScenarioFileSet fs;
    const auto cfg_text = slurp(root / kConfigFile, kConfigFile);
    fs.files[kConfigFile] = cfg_text;
    json cfg;
    try {
        cfg = json::parse(cfg_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("schema-mismatch", kConfigFile, 0, 0, e.what());
    }
    if (cfg.is_object() && cfg.contains("days") && cfg["days"].is_array()) {
        for (const auto& d : cfg["days"]) {
            if (d.is_object() && d.contains("series") && d["series"].is_string()) {
                const auto rel = d["series"].get<std::string>();
                fs.files[rel] = slurp(root / rel, rel);
            }
        }
    }
    return fs;
}

PlanningProblem load_scenario(const std::filesystem::path& root)
{
    return from_file_set(read_file_set(root));
}

void save_scenario(const PlanningProblem& problem, const std::filesystem::path& root)
{
    write_file_set(to_file_set(problem), root);
}

std::string digest(const ScenarioFileSet& files)
{
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    for (const auto& [path, content] : files.files) {
        const std::uint64_t sizes[2] = {path.size(), content.size()};
        EVP_DigestUpdate(ctx, sizes, sizeof(sizes));
        EVP_DigestUpdate(ctx, path.data(), path.size());
        EVP_DigestUpdate(ctx, content.data(), content.size());
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 0xf];
    }
    return hex;
}

// ---------------------------------------------------------------------------
// Default scenario synthesis

namespace {

constexpr int kIntervals = 96;
constexpr double kDt = 0.25;
constexpr int kHouses = 20;

double bump(double hour, double center, double width)
{
    const double z = (hour - center) / width;
    return std::exp(-0.5 * z * z);
}

struct Season {
    const char* label;
    int month_group;
    double demand_charge;
    double temp_mean;
    double temp_amplitude;
    double sun_peak_wm2;
    double sunrise;
    double sunset;
    double wind_mean;
    // price = base + a1 * bump(c1, w1) + a2 * bump(c2, w2)
    double price_base, a1, c1, w1, a2, c2, w2;
    double midday_load;  // extra residential load around mid-afternoon
};

constexpr Season kSeasons[] = {
    {"winter", 0, 1.0, 4.0, 5.0, 450.0, 7.5, 17.5, 0.38, 0.16, 0.20, 8.0, 1.3, 0.24, 18.5, 1.8, 0.00},
    {"spring", 1, 1.0, 13.0, 5.0, 750.0, 6.5, 19.5, 0.32, 0.15, 0.12, 8.5, 1.5, 0.20, 17.0, 2.0, 0.05},
    {"summer", 2, 2.0, 29.0, 6.0, 900.0, 6.0, 20.0, 0.22, 0.14, 0.08, 9.0, 1.5, 0.42, 14.5, 1.8, 0.30},
};

Series ambient_series(const Season& s, std::mt19937_64& rng)
{
    std::normal_distribution<double> noise(0.0, 0.25);
    Series out(kIntervals);
    double drift = 0.0;
    for (int t = 0; t < kIntervals; ++t) {
        const double hour = (t + 0.5) * kDt;
        drift = 0.9 * drift + noise(rng);
        // Minimum near 05:00, maximum near 15:00.
        out[t] = s.temp_mean - s.temp_amplitude * std::cos(2.0 * std::numbers::pi * (hour - 3.0) / 24.0 - 0.4) + drift;
    }
    return out;
}

Series irradiance_series(const Season& s, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> cloud(0.85, 1.0);
    Series out(kIntervals);
    for (int t = 0; t < kIntervals; ++t) {
        const double hour = (t + 0.5) * kDt;
        if (hour <= s.sunrise || hour >= s.sunset) {
            out[t] = 0.0;
            continue;
        }
        const double phase = (hour - s.sunrise) / (s.sunset - s.sunrise);
        out[t] = s.sun_peak_wm2 * std::pow(std::sin(std::numbers::pi * phase), 1.5) * cloud(rng);
    }
    return out;
}

Series price_series(const Season& s)
{
    Series out(kIntervals);
    for (int t = 0; t < kIntervals; ++t) {
        const double hour = (t + 0.5) * kDt;
        out[t] = s.price_base + s.a1 * bump(hour, s.c1, s.w1) + s.a2 * bump(hour, s.c2, s.w2);
    }
    return out;
}

Series wind_series(const Season& s, std::mt19937_64& rng)
{
    std::normal_distribution<double> noise(0.0, 0.04);
    Series out(kIntervals);
    double level = s.wind_mean;
    for (int t = 0; t < kIntervals; ++t) {
        const double hour = (t + 0.5) * kDt;
        level = s.wind_mean + 0.92 * (level - s.wind_mean) + noise(rng);
        // Slightly windier at night.
        const double v = level + 0.06 * std::cos(2.0 * std::numbers::pi * hour / 24.0);
        out[t] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

Series load_shape(const Season& s, double scale, double shift_h, std::mt19937_64& rng)
{
    std::normal_distribution<double> noise(0.0, 0.04);
    Series out(kIntervals);
    for (int t = 0; t < kIntervals; ++t) {
        const double hour = (t + 0.5) * kDt - shift_h;
        const double base = 0.40 + 0.35 * bump(hour, 7.5, 1.2) + 0.55 * bump(hour, 19.0, 2.0) +
                            s.midday_load * bump(hour, 14.5, 3.0) + 0.10 * bump(hour, 12.5, 1.0);
        out[t] = std::max(0.05, scale * base * (1.0 + noise(rng)));
    }
    return out;
}

DfgCandidate make_dfg(const char* name, double p_max, double p_min, double capital, const double (&costs)[3],
                      double no_load, double startup)
{
    DfgCandidate g;
    g.name = name;
    g.p_min_kw = p_min;
    g.p_max_kw = p_max;
    const double width = (p_max - p_min) / 3.0;
    for (double c : costs) {
        g.blocks.push_back({c, width});
    }
    // Keep the widths summing exactly to p_max - p_min.
    g.blocks.back().width_kw = (p_max - p_min) - 2.0 * width;
    g.no_load_cost_per_h = no_load;
    g.startup_cost = startup;
    g.capital_cost_per_kw = capital;
    g.count_limit = 2;
    return g;
}

}  // namespace

RcParameters default_house_rc()
{
    return RcParameters{};
}

ScenarioFileSet synthesize_default_scenario(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    PlanningProblem p;
    p.pcc_limit_kw = 500.0;
    p.budget = 100000.0;
    p.pi1 = 1.0;
    p.pi2 = 4.0;  // each representative day stands for four months
    p.mip_rel_gap = 0.005;

    for (const auto& s : kSeasons) {
        RepresentativeDay d;
        d.label = s.label;
        d.month_group = s.month_group;
        d.weight_days = 365.0 / 3.0;
        d.interval_count = kIntervals;
        d.dt_hours = kDt;
        d.demand_charge_per_kw = s.demand_charge;
        d.ambient_temp_c = ambient_series(s, rng);
        d.irradiance_wm2 = irradiance_series(s, rng);
        d.pcc_price_per_kwh = price_series(s);
        p.days.push_back(std::move(d));
    }

    ResCandidate wt{"WT", ResKind::wind, 120.0, {}, 2700.0, 2};
    ResCandidate pv{"PV", ResKind::pv, 80.0, {}, 2100.0, 2};
    for (std::size_t d = 0; d < p.days.size(); ++d) {
        wt.capacity_factor.push_back(wind_series(kSeasons[d], rng));
        Series cf(kIntervals);
        for (int t = 0; t < kIntervals; ++t) {
            cf[t] = std::clamp(p.days[d].irradiance_wm2[t] / 1000.0, 0.0, 1.0);
        }
        pv.capacity_factor.push_back(std::move(cf));
    }
    p.res = {wt, pv};

    p.dfg = {make_dfg("DE", 60.0, 10.0, 540.0, {0.2822, 0.3732, 0.4643}, 4.0, 6.0),
             make_dfg("MT", 80.0, 10.0, 810.0, {0.2392, 0.3163, 0.3936}, 3.0, 4.0)};

    EssCandidate es1;
    es1.name = "ES1";
    es1.p_max_kw = 90.0;
    es1.e_max_kwh = 150.0;
    es1.soc_min_frac = 0.1;
    es1.soc_max_frac = 0.9;
    es1.eta_charge = es1.eta_discharge = 0.95;
    es1.power_cost_per_kw = 324.0;
    es1.energy_cost_per_kwh = 180.0;
    es1.count_limit = 2;
    EssCandidate es2 = es1;
    es2.name = "ES2";
    es2.p_max_kw = 100.0;
    es2.e_max_kwh = 200.0;
    es2.eta_charge = es2.eta_discharge = 0.85;
    es2.power_cost_per_kw = 240.0;
    es2.energy_cost_per_kwh = 216.0;
    p.ess = {es1, es2};

    HouseProfile base;
    base.name = "house";
    base.thermal.dt_hours = kDt;
    base.thermal.hvac_rated_power_kw = 5.0;
    base.thermal.cop = 4.0;
    base.thermal.discomfort_cost_per_degc = 0.05;
    base.shed_penalty_per_kwh = 10.0;
    thermal::apply_rc(base, default_house_rc());
    auto houses = thermal::perturb_houses(base, kHouses, 0.1, seed ^ 0x9e3779b97f4a7c15ULL);

    std::uniform_real_distribution<double> scale_dist(0.7, 1.3);
    std::normal_distribution<double> shift_dist(0.0, 0.5);
    double population_peak = 0.0;
    std::vector<double> population(p.days.size() * kIntervals, 0.0);
    for (auto& h : houses) {
        const double scale = scale_dist(rng);
        const double shift = shift_dist(rng);
        for (std::size_t d = 0; d < p.days.size(); ++d) {
            h.non_hvac_load_kw.push_back(load_shape(kSeasons[d], scale, shift, rng));
            h.thermal.desired_temp_c.emplace_back(kIntervals, 21.0);
            h.thermal.band_halfwidth_c.emplace_back(kIntervals, 2.0);
            for (int t = 0; t < kIntervals; ++t) {
                population[d * kIntervals + t] += h.non_hvac_load_kw[d][t];
            }
        }
    }
    population_peak = *std::max_element(population.begin(), population.end());
    const double factor = kDefaultPopulationPeakKw / population_peak;
    for (auto& h : houses) {
        h.max_shed_kw.clear();
        for (auto& day : h.non_hvac_load_kw) {
            Series shed(day.size());
            for (std::size_t t = 0; t < day.size(); ++t) {
                day[t] *= factor;
                shed[t] = 0.1 * day[t];
            }
            h.max_shed_kw.push_back(std::move(shed));
        }
    }
    p.houses = std::move(houses);
    return to_file_set(p);
}

}  // namespace mgplan::io
