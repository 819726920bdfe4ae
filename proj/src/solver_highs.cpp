#include "mgplan/solver.hpp"

#include <Highs.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace mgplan::solver {

namespace {

HighsLp to_highs_lp(const MilpModel& model, bool keep_integrality)
{
    const auto& vars = model.variables();
    const auto& rows = model.constraints();
    const auto n = static_cast<HighsInt>(vars.size());
    const auto m = static_cast<HighsInt>(rows.size());

    HighsLp lp;
    lp.num_col_ = n;
    lp.num_row_ = m;
    lp.sense_ = ObjSense::kMinimize;
    lp.offset_ = model.objective_offset();
    lp.col_cost_.resize(n);
    lp.col_lower_.resize(n);
    lp.col_upper_.resize(n);
    bool any_integer = false;
    std::vector<HighsVarType> integrality(n, HighsVarType::kContinuous);
    for (HighsInt j = 0; j < n; ++j) {
        lp.col_cost_[j] = vars[j].objective;
        lp.col_lower_[j] = std::isinf(vars[j].lower) ? (vars[j].lower < 0 ? -kHighsInf : kHighsInf) : vars[j].lower;
        lp.col_upper_[j] = std::isinf(vars[j].upper) ? (vars[j].upper < 0 ? -kHighsInf : kHighsInf) : vars[j].upper;
        if (keep_integrality && vars[j].kind == VarKind::binary) {
            integrality[j] = HighsVarType::kInteger;
            any_integer = true;
        }
    }
    if (any_integer) {
        lp.integrality_ = std::move(integrality);
    }

    lp.row_lower_.resize(m);
    lp.row_upper_.resize(m);
    std::vector<HighsInt> count(n + 1, 0);
    for (HighsInt i = 0; i < m; ++i) {
        const auto& r = rows[i];
        lp.row_lower_[i] = r.sense == RowSense::less_equal ? -kHighsInf : r.rhs;
        lp.row_upper_[i] = r.sense == RowSense::greater_equal ? kHighsInf : r.rhs;
        for (const auto& t : r.terms) {
            ++count[t.var + 1];
        }
    }
    // Column-wise CSC.
    auto& a = lp.a_matrix_;
    a.format_ = MatrixFormat::kColwise;
    a.num_col_ = n;
    a.num_row_ = m;
    a.start_.assign(n + 1, 0);
    for (HighsInt j = 0; j < n; ++j) {
        a.start_[j + 1] = a.start_[j] + count[j + 1];
    }
    a.index_.resize(a.start_[n]);
    a.value_.resize(a.start_[n]);
    std::vector<HighsInt> fill(a.start_.begin(), a.start_.end() - 1);
    for (HighsInt i = 0; i < m; ++i) {
        for (const auto& t : rows[i].terms) {
            const HighsInt k = fill[t.var]++;
            a.index_[k] = i;
            a.value_[k] = t.coef;
        }
    }
    return lp;
}

void configure(Highs& highs, const SolveOptions& options)
{
    highs.setOptionValue("output_flag", options.verbosity > 0 || static_cast<bool>(options.log));
    highs.setOptionValue("log_to_console", options.verbosity > 0 && !options.log);
    highs.setOptionValue("mip_rel_gap", options.rel_gap);
    highs.setOptionValue("mip_abs_gap", 1e-9);
    if (std::isfinite(options.time_limit_s)) {
        highs.setOptionValue("time_limit", options.time_limit_s);
    }
    highs.setOptionValue("threads", std::max(1, options.thread_count));
    highs.setOptionValue("random_seed", static_cast<HighsInt>(options.seed));
    if (options.log) {
        LogSink sink = options.log;
        highs.setCallback([sink](int type, const std::string& message, const HighsCallbackOutput*,
                                 HighsCallbackInput*, void*) {
            if (type == kCallbackLogging) {
                sink(message);
            }
        });
        highs.startCallback(kCallbackLogging);
    }
}

double elapsed_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string describe(const Highs& highs)
{
    return highs.modelStatusToString(highs.getModelStatus());
}

// Fill status/objective/values from a finished run. Throws NumericalFailure
// for statuses that carry no usable answer.
void read_outcome(Highs& highs, const HighsLp& lp, bool is_mip, SolveOutcome& out)
{
    const auto status = highs.getModelStatus();
    const auto& info = highs.getInfo();
    out.message = describe(highs);
    double applied = kDefaultRelGap;
    highs.getOptionValue("mip_rel_gap", applied);
    out.applied_rel_gap = applied;

    const bool has_primal = info.primal_solution_status == kSolutionStatusFeasible;
    if (has_primal) {
        out.values = highs.getSolution().col_value;
        out.objective = info.objective_function_value;
    }
    out.best_bound = is_mip ? info.mip_dual_bound : out.objective;

    switch (status) {
    case HighsModelStatus::kOptimal:
        out.status = (!is_mip || out.relative_gap() <= 1e-9) ? SolveStatus::optimal : SolveStatus::feasible_gap;
        if (!is_mip) {
            out.best_bound = out.objective;
        }
        return;
    case HighsModelStatus::kInfeasible:
        out.status = SolveStatus::infeasible;
        out.values.clear();
        return;
    case HighsModelStatus::kUnbounded:
        out.status = SolveStatus::unbounded;
        return;
    case HighsModelStatus::kUnboundedOrInfeasible: {
        // Disambiguate without presolve.
        Highs probe;
        probe.setOptionValue("output_flag", false);
        probe.setOptionValue("presolve", "off");
        probe.passModel(lp);
        probe.run();
        const auto s = probe.getModelStatus();
        out.status = s == HighsModelStatus::kUnbounded ? SolveStatus::unbounded : SolveStatus::infeasible;
        out.values.clear();
        return;
    }
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt:
        out.status = SolveStatus::timeout;
        return;
    default:
        throw NumericalFailure("numerical-failure: HiGHS returned '" + out.message + "'");
    }
}

}  // namespace

const char* to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible_gap: return "feasible-gap";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::timeout: return "timeout";
    }
    return "?";
}

double SolveOutcome::relative_gap() const
{
    if (!std::isfinite(objective) || !std::isfinite(best_bound)) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(0.0, objective - best_bound) / std::max(1.0, std::abs(objective));
}

std::string selected_backend()
{
    const char* env = std::getenv("MGPLAN_SOLVER");
    std::string name = env ? env : "";
    if (name.empty() || name == "highs" || name == "HiGHS") {
        return "highs";
    }
    throw SolverUnavailable("solver-unavailable: no binding for MGPLAN_SOLVER='" + name + "' (available: highs)");
}

void check_options(const SolveOptions& options)
{
    if (!(options.rel_gap >= 0.0 && options.rel_gap <= 1.0)) {
        throw InvalidOptions("rel_gap must lie in [0,1]");
    }
    if (!(options.time_limit_s > 0.0)) {
        throw InvalidOptions("time_limit_s must be positive");
    }
}

SolveOutcome solve(const MilpModel& model, const SolveOptions& options)
{
    check_options(options);
    SolveOutcome out;
    out.backend = selected_backend();
    const auto start = std::chrono::steady_clock::now();

    const HighsLp lp = to_highs_lp(model, true);
    const bool is_mip = model.binary_count() > 0;

    Highs highs;
    configure(highs, options);
    if (highs.passModel(lp) == HighsStatus::kError) {
        throw NumericalFailure("numerical-failure: HiGHS rejected the model");
    }
    if (!options.start.empty() && static_cast<int>(options.start.size()) == model.variable_count()) {
        out.start_feasible = model.max_violation(options.start) <= 1e-6;
        if (out.start_feasible && is_mip) {
            HighsSolution sol;
            sol.col_value = options.start;
            sol.value_valid = true;
            highs.setSolution(sol);
        }
    }
    highs.run();
    read_outcome(highs, lp, is_mip, out);

    if (is_mip && options.polish && out.has_solution()) {
        const auto ids = model.binary_ids();
        std::vector<std::uint8_t> assignment(ids.size());
        for (std::size_t k = 0; k < ids.size(); ++k) {
            assignment[k] = out.values[ids[k]] > 0.5 ? 1 : 0;
        }
        SolveOptions lp_options = options;
        lp_options.start.clear();
        lp_options.log = nullptr;
        lp_options.verbosity = 0;
        const auto polished = solve_lp_with_fixed_binaries(model, assignment, lp_options);
        if (polished.status == SolveStatus::optimal && polished.objective <= out.objective + 1e-9 * std::max(1.0, std::abs(out.objective))) {
            out.values = polished.values;
            out.objective = polished.objective;
        }
    }
    out.wall_time_s = elapsed_since(start);
    return out;
}

SolveOutcome solve_relaxation(const MilpModel& model, const SolveOptions& options)
{
    check_options(options);
    SolveOutcome out;
    out.backend = selected_backend();
    const auto start = std::chrono::steady_clock::now();
    const HighsLp lp = to_highs_lp(model, false);
    Highs highs;
    configure(highs, options);
    if (highs.passModel(lp) == HighsStatus::kError) {
        throw NumericalFailure("numerical-failure: HiGHS rejected the model");
    }
    highs.run();
    read_outcome(highs, lp, false, out);
    out.wall_time_s = elapsed_since(start);
    return out;
}

// ---------------------------------------------------------------------------

struct FixedBinaryLp::Impl {
    HighsLp lp;
    Highs highs;
    std::vector<int> binaries;
    std::vector<HighsInt> cols;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::int8_t> current;  // 0, 1 or kRelaxed as last passed; the LP starts relaxed
    std::string backend;
};

FixedBinaryLp::FixedBinaryLp(const MilpModel& model, const SolveOptions& options) : impl_(std::make_unique<Impl>())
{
    check_options(options);
    impl_->backend = selected_backend();
    impl_->lp = to_highs_lp(model, false);
    impl_->binaries = model.binary_ids();
    impl_->current.assign(impl_->binaries.size(), kRelaxed);
    configure(impl_->highs, options);
    impl_->highs.setOptionValue("presolve", "off");
    if (impl_->highs.passModel(impl_->lp) == HighsStatus::kError) {
        throw NumericalFailure("numerical-failure: HiGHS rejected the model");
    }
}

FixedBinaryLp::~FixedBinaryLp() = default;

const std::vector<int>& FixedBinaryLp::binary_ids() const
{
    return impl_->binaries;
}

SolveOutcome FixedBinaryLp::solve(std::span<const std::uint8_t> assignment)
{
    std::vector<std::int8_t> partial(assignment.begin(), assignment.end());
    return solve_partial(partial);
}

SolveOutcome FixedBinaryLp::solve_partial(std::span<const std::int8_t> assignment)
{
    if (assignment.size() != impl_->binaries.size()) {
        throw InvalidOptions("assignment must cover every binary variable");
    }
    const auto start = std::chrono::steady_clock::now();
    // Only touch columns whose bounds changed so the previous basis stays valid.
    impl_->cols.clear();
    impl_->lower.clear();
    impl_->upper.clear();
    for (std::size_t k = 0; k < assignment.size(); ++k) {
        const std::int8_t v = assignment[k] == kRelaxed ? kRelaxed : (assignment[k] ? 1 : 0);
        if (impl_->current[k] != v) {
            impl_->current[k] = v;
            impl_->cols.push_back(impl_->binaries[k]);
            const HighsInt j = impl_->binaries[k];
            impl_->lower.push_back(v == kRelaxed ? impl_->lp.col_lower_[j] : v);
            impl_->upper.push_back(v == kRelaxed ? impl_->lp.col_upper_[j] : v);
        }
    }
    if (!impl_->cols.empty()) {
        impl_->highs.changeColsBounds(static_cast<HighsInt>(impl_->cols.size()), impl_->cols.data(),
                                      impl_->lower.data(), impl_->upper.data());
    }
    impl_->highs.run();
    SolveOutcome out;
    out.backend = impl_->backend;
    read_outcome(impl_->highs, impl_->lp, false, out);
    out.wall_time_s = elapsed_since(start);
    return out;
}

SolveOutcome solve_lp_with_fixed_binaries(const MilpModel& model, std::span<const std::uint8_t> assignment,
                                          const SolveOptions& options)
{
    check_options(options);
    const auto ids = model.binary_ids();
    if (assignment.size() != ids.size()) {
        throw InvalidOptions("assignment must cover every binary variable");
    }
    SolveOutcome out;
    out.backend = selected_backend();
    const auto start = std::chrono::steady_clock::now();
    HighsLp lp = to_highs_lp(model, false);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        lp.col_lower_[ids[k]] = lp.col_upper_[ids[k]] = assignment[k] ? 1.0 : 0.0;
    }
    Highs highs;
    configure(highs, options);
    if (highs.passModel(lp) == HighsStatus::kError) {
        throw NumericalFailure("numerical-failure: HiGHS rejected the model");
    }
    highs.run();
    read_outcome(highs, lp, false, out);
    out.wall_time_s = elapsed_since(start);
    return out;
}

}  // namespace mgplan::solver
