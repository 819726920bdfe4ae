#pragma once

// MILP solver boundary: MilpModel in, SolveOutcome out. The reference
// backend is HiGHS; MGPLAN_SOLVER selects the backend by name.

#include "mgplan/milp.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgplan::solver {

/// Relative MIP gap used when nothing else is configured.
inline constexpr double kDefaultRelGap = 0.005;

enum class SolveStatus { optimal, feasible_gap, infeasible, unbounded, timeout };

const char* to_string(SolveStatus status);

using LogSink = std::function<void(const std::string&)>;

struct SolveOptions {
    double rel_gap = kDefaultRelGap;
    double time_limit_s = std::numeric_limits<double>::infinity();
    int thread_count = 1;
    int verbosity = 0;  // 0 silent, 1 solver log to sink/console
    std::uint32_t seed = 0;
    LogSink log;
    /// Optional full column vector offered as an initial incumbent.
    std::vector<double> start;
    /// Re-solve the LP with binaries fixed at the incumbent so the returned
    /// continuous part is a clean basic solution.
    bool polish = true;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::infeasible;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double best_bound = -std::numeric_limits<double>::infinity();
    std::vector<double> values;
    double wall_time_s = 0.0;
    std::string backend;
    double applied_rel_gap = kDefaultRelGap;  // as read back from the backend
    bool start_feasible = false;              // options.start was a feasible point
    std::string message;

    bool has_solution() const { return !values.empty(); }
    bool ok() const { return status == SolveStatus::optimal || status == SolveStatus::feasible_gap; }
    /// (objective - bound) / max(1, |objective|).
    double relative_gap() const;
};

class SolverUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidOptions : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Backend named by MGPLAN_SOLVER (default "highs"). Throws SolverUnavailable
/// for names without a binding.
std::string selected_backend();

void check_options(const SolveOptions& options);

SolveOutcome solve(const MilpModel& model, const SolveOptions& options = {});

/// Continuous relaxation: binaries become [0,1] columns.
SolveOutcome solve_relaxation(const MilpModel& model, const SolveOptions& options = {});

/// Fix every binary to `assignment` (ordered as model.binary_ids()) and solve
/// the remaining LP.
SolveOutcome solve_lp_with_fixed_binaries(const MilpModel& model, std::span<const std::uint8_t> assignment,
                                          const SolveOptions& options = {});

/// Reusable LP handle for many fixed-binary solves of one model; bound
/// changes between calls keep the previous basis as a hot start.
class FixedBinaryLp {
public:
    FixedBinaryLp(const MilpModel& model, const SolveOptions& options = {});
    ~FixedBinaryLp();
    FixedBinaryLp(const FixedBinaryLp&) = delete;
    FixedBinaryLp& operator=(const FixedBinaryLp&) = delete;

    SolveOutcome solve(std::span<const std::uint8_t> assignment);
    /// Entries 0/1 fix a binary; kRelaxed restores its model bounds.
    SolveOutcome solve_partial(std::span<const std::int8_t> assignment);
    static constexpr std::int8_t kRelaxed = -1;
    const std::vector<int>& binary_ids() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mgplan::solver
