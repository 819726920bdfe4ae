#include "mgplan/milp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mgplan {

int MilpModel::add_variable(VarKind kind, double lower, double upper, double objective)
{
    variables_.push_back({kind, lower, upper, objective});
    return static_cast<int>(variables_.size()) - 1;
}

void MilpModel::add_constraint(std::vector<Term> terms, RowSense sense, double rhs, std::string family)
{
    constraints_.push_back({std::move(terms), sense, rhs, std::move(family)});
}

void MilpModel::set_bounds(int var, double lower, double upper)
{
    auto& v = variables_.at(var);
    v.lower = lower;
    v.upper = upper;
}

int MilpModel::binary_count() const
{
    return static_cast<int>(std::count_if(variables_.begin(), variables_.end(),
                                          [](const Variable& v) { return v.kind == VarKind::binary; }));
}

std::vector<int> MilpModel::binary_ids() const
{
    std::vector<int> ids;
    for (int i = 0; i < variable_count(); ++i) {
        if (variables_[i].kind == VarKind::binary) {
            ids.push_back(i);
        }
    }
    return ids;
}

int MilpModel::count_family(const std::string& family) const
{
    return static_cast<int>(std::count_if(constraints_.begin(), constraints_.end(),
                                          [&](const Constraint& c) { return c.family == family; }));
}

double MilpModel::evaluate_objective(std::span<const double> values) const
{
    double total = objective_offset_;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        total += variables_[i].objective * values[i];
    }
    return total;
}

double MilpModel::max_violation(std::span<const double> values) const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto& v = variables_[i];
        worst = std::max({worst, v.lower - values[i], values[i] - v.upper});
        if (v.kind == VarKind::binary) {
            worst = std::max(worst, std::abs(values[i] - std::round(values[i])));
        }
    }
    for (const auto& row : constraints_) {
        double activity = 0.0;
        for (const auto& t : row.terms) {
            activity += t.coef * values[t.var];
        }
        switch (row.sense) {
        case RowSense::less_equal: worst = std::max(worst, activity - row.rhs); break;
        case RowSense::greater_equal: worst = std::max(worst, row.rhs - activity); break;
        case RowSense::equal: worst = std::max(worst, std::abs(activity - row.rhs)); break;
        }
    }
    return worst;
}

void MilpModel::check_invariants() const
{
    const int n = variable_count();
    for (int i = 0; i < n; ++i) {
        const auto& v = variables_[i];
        if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.objective)) {
            throw std::logic_error("variable " + std::to_string(i) + " has non-finite data");
        }
        if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0 || v.lower > v.upper)) {
            throw std::logic_error("binary variable " + std::to_string(i) + " has bounds outside {0,1}");
        }
    }
    for (std::size_t r = 0; r < constraints_.size(); ++r) {
        const auto& row = constraints_[r];
        if (!std::isfinite(row.rhs)) {
            throw std::logic_error("row " + std::to_string(r) + " (" + row.family + ") has non-finite rhs");
        }
        for (const auto& t : row.terms) {
            if (t.var < 0 || t.var >= n) {
                throw std::logic_error("row " + std::to_string(r) + " (" + row.family +
                                       ") references undefined variable");
            }
            if (!std::isfinite(t.coef)) {
                throw std::logic_error("row " + std::to_string(r) + " (" + row.family +
                                       ") has non-finite coefficient");
            }
        }
    }
    if (!std::isfinite(objective_offset_)) {
        throw std::logic_error("objective offset is non-finite");
    }
}

const char* to_string(Family family)
{
    switch (family) {
    case Family::install: return "install";
    case Family::dfg_power: return "dfg_power";
    case Family::dfg_block: return "dfg_block";
    case Family::dfg_commit: return "dfg_commit";
    case Family::dfg_startup: return "dfg_startup";
    case Family::ess_charge: return "ess_charge";
    case Family::ess_discharge: return "ess_discharge";
    case Family::ess_soc: return "ess_soc";
    case Family::res_power: return "res_power";
    case Family::hvac_heat: return "hvac_heat";
    case Family::hvac_cool: return "hvac_cool";
    case Family::shed: return "shed";
    case Family::temp_indoor: return "temp_indoor";
    case Family::temp_mass: return "temp_mass";
    case Family::temp_envelope: return "temp_envelope";
    case Family::slack_below: return "slack_below";
    case Family::slack_above: return "slack_above";
    case Family::pcc: return "pcc";
    case Family::peak: return "peak";
    }
    return "?";
}

std::string to_string(const VarKey& key)
{
    std::string s = to_string(key.family);
    for (int c : {key.entity, key.day, key.interval, key.sub}) {
        if (c >= 0) {
            s += '_';
            s += std::to_string(c);
        }
    }
    return s;
}

void VariableIndex::insert(const VarKey& key, int id)
{
    if (id != size()) {
        throw std::logic_error("VariableIndex: ids must be registered in column order");
    }
    if (!ids_.emplace(key, id).second) {
        throw std::logic_error("VariableIndex: duplicate key " + to_string(key));
    }
    keys_.push_back(key);
}

int VariableIndex::at(const VarKey& key) const
{
    const auto it = ids_.find(key);
    if (it == ids_.end()) {
        throw std::out_of_range("VariableIndex: no variable " + to_string(key));
    }
    return it->second;
}

int VariableIndex::find(const VarKey& key) const
{
    const auto it = ids_.find(key);
    return it == ids_.end() ? -1 : it->second;
}

int VariableIndex::count(Family family) const
{
    return static_cast<int>(std::count_if(keys_.begin(), keys_.end(),
                                          [&](const VarKey& k) { return k.family == family; }));
}

namespace {

std::string num(double v)
{
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

}  // namespace

void write_mps(std::ostream& out, const MilpModel& model, const VariableIndex* index,
               const std::string& name)
{
    const auto col_name = [&](int id) {
        return index && id < index->size() ? to_string(index->key(id)) : "x" + std::to_string(id);
    };
    const auto& rows = model.constraints();
    const auto& vars = model.variables();

    // Column-major view of the rows.
    std::vector<std::vector<std::pair<int, double>>> columns(vars.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const auto& t : rows[r].terms) {
            columns[t.var].emplace_back(static_cast<int>(r), t.coef);
        }
    }

    out << "NAME " << name << "\n";
    out << "OBJSENSE\n    MIN\n";
    out << "ROWS\n N  COST\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const char* s = rows[r].sense == RowSense::equal ? "E" : rows[r].sense == RowSense::less_equal ? "L" : "G";
        out << " " << s << "  R" << r << "\n";
    }
    out << "COLUMNS\n";
    bool in_integer = false;
    int marker = 0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const bool integer = vars[j].kind == VarKind::binary;
        if (integer != in_integer) {
            out << "    MARKER" << marker++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'") << "\n";
            in_integer = integer;
        }
        const auto cname = col_name(static_cast<int>(j));
        if (vars[j].objective != 0.0) {
            out << "    " << cname << " COST " << num(vars[j].objective) << "\n";
        }
        for (const auto& [r, c] : columns[j]) {
            out << "    " << cname << " R" << r << " " << num(c) << "\n";
        }
        if (vars[j].objective == 0.0 && columns[j].empty()) {
            out << "    " << cname << " COST 0\n";
        }
    }
    if (in_integer) {
        out << "    MARKER" << marker << " 'MARKER' 'INTEND'\n";
    }
    out << "RHS\n";
    if (model.objective_offset() != 0.0) {
        out << "    RHS COST " << num(-model.objective_offset()) << "\n";
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].rhs != 0.0) {
            out << "    RHS R" << r << " " << num(rows[r].rhs) << "\n";
        }
    }
    out << "BOUNDS\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const auto cname = col_name(static_cast<int>(j));
        const auto& v = vars[j];
        if (v.kind == VarKind::binary && v.lower == 0.0 && v.upper == 1.0) {
            out << " BV BND " << cname << "\n";
            continue;
        }
        if (v.lower == v.upper) {
            out << " FX BND " << cname << " " << num(v.lower) << "\n";
            continue;
        }
        if (std::isinf(v.lower) && v.lower < 0) {
            out << " MI BND " << cname << "\n";
        } else if (v.lower != 0.0) {
            out << " LO BND " << cname << " " << num(v.lower) << "\n";
        }
        if (!std::isinf(v.upper)) {
            out << " UP BND " << cname << " " << num(v.upper) << "\n";
        }
    }
    out << "ENDATA\n";
}

}  // namespace mgplan
