#pragma once

// Exhaustive enumeration over binaries with LP completion. Only for tiny
// models; it exists to check the branch-and-bound answer independently.

#include "mgplan/milp.hpp"
#include "mgplan/solver.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mgplan::oracle {

struct OracleOptions {
    int max_binaries = 24;
    /// Skip assignments that violate rows made only of binaries (and fixed
    /// binary bounds) before calling the LP.
    bool prune = true;
    /// When > 0 the last block_bits binaries form an inner block. Each outer
    /// assignment first solves the LP with the block relaxed and skips the
    /// whole block when that bound is infeasible or above the incumbent by
    /// more than 1e-7 relative. Near-ties are still enumerated.
    int block_bits = 0;
    solver::SolveOptions lp_options;
};

struct OracleResult {
    bool feasible = false;
    double best_objective = 0.0;
    std::vector<std::uint8_t> best_assignment;  // ordered as MilpModel::binary_ids()
    std::vector<double> best_values;
    long evaluated = 0;   // LPs solved
    long infeasible = 0;  // LPs reported infeasible
    long pruned = 0;      // skipped without an LP
    long bound_solves = 0;    // relaxed-block LPs
    long skipped_blocks = 0;  // blocks dropped on their bound
};

class TooManyBinaries : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Global minimum over all 2^k binary assignments. Ties (objectives within
/// 1e-9 relative) go to the lexicographically smallest assignment.
OracleResult enumerate_optimum(const MilpModel& model, const OracleOptions& options = {});

}  // namespace mgplan::oracle
