#pragma once

// Solver-agnostic sparse MILP and the semantic key <-> column map.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mgplan {

enum class VarKind { continuous, binary };
enum class RowSense { less_equal, equal, greater_equal };

struct Variable {
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = 0.0;
    double objective = 0.0;
};

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::vector<Term> terms;
    RowSense sense = RowSense::equal;
    double rhs = 0.0;
    std::string family;  // e.g. "budget", "soc-transition"
};

/// Minimization model: min c'x + offset subject to sparse rows and bounds.
class MilpModel {
public:
    int add_variable(VarKind kind, double lower, double upper, double objective = 0.0);
    int add_binary(double objective = 0.0) { return add_variable(VarKind::binary, 0.0, 1.0, objective); }
    void add_constraint(std::vector<Term> terms, RowSense sense, double rhs, std::string family);

    void add_objective(int var, double coef) { variables_.at(var).objective += coef; }
    void add_objective_offset(double value) { objective_offset_ += value; }
    void set_bounds(int var, double lower, double upper);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    double objective_offset() const { return objective_offset_; }

    int variable_count() const { return static_cast<int>(variables_.size()); }
    int constraint_count() const { return static_cast<int>(constraints_.size()); }
    int binary_count() const;
    std::vector<int> binary_ids() const;
    int count_family(const std::string& family) const;

    /// c'x + offset.
    double evaluate_objective(std::span<const double> values) const;

    /// Largest bound, row, or integrality violation of a point.
    double max_violation(std::span<const double> values) const;

    /// Throws std::logic_error on dangling references, non-finite data, or
    /// binaries with bounds outside {0,1}.
    void check_invariants() const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    double objective_offset_ = 0.0;
};

/// Variable families covering every decision variable of the planning model.
enum class Family : std::uint8_t {
    install,        // delta per unit
    dfg_power,      // P_ndt
    dfg_block,      // P_ndtl (sub = block)
    dfg_commit,     // alpha
    dfg_startup,    // beta
    ess_charge,
    ess_discharge,
    ess_soc,
    res_power,
    hvac_heat,      // u^H
    hvac_cool,      // u^C
    shed,
    temp_indoor,
    temp_mass,
    temp_envelope,
    slack_below,    // s1: T_d - T_in when indoor is below desired
    slack_above,    // s2
    pcc,
    peak,           // P_m^pk, entity = month group
};

const char* to_string(Family family);

/// (family, entity, day, interval, sub). Unused coordinates are -1.
struct VarKey {
    Family family = Family::install;
    int entity = -1;
    int day = -1;
    int interval = -1;
    int sub = -1;

    auto operator<=>(const VarKey&) const = default;
};

std::string to_string(const VarKey& key);

/// Bijection between semantic keys and model column ids.
class VariableIndex {
public:
    /// Registers a fresh key for the next column id. Throws on duplicates
    /// or when `id` is not the next id.
    void insert(const VarKey& key, int id);

    int at(const VarKey& key) const;
    int find(const VarKey& key) const;  // -1 when absent
    bool contains(const VarKey& key) const { return find(key) >= 0; }
    const VarKey& key(int id) const { return keys_.at(id); }
    int size() const { return static_cast<int>(keys_.size()); }
    int count(Family family) const;

private:
    std::map<VarKey, int> ids_;
    std::vector<VarKey> keys_;
};

/// Fixed-format-free MPS text (column names from the index, or x<id>).
void write_mps(std::ostream& out, const MilpModel& model, const VariableIndex* index = nullptr,
               const std::string& name = "MGPLAN");

}  // namespace mgplan
