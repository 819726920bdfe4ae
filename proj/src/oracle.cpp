#include "mgplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mgplan::oracle {

namespace {

struct PureRow {
    std::vector<std::pair<int, double>> terms;  // (binary position, coef)
    RowSense sense;
    double rhs;
};

bool satisfied(const PureRow& row, const std::vector<std::uint8_t>& a)
{
    constexpr double kTol = 1e-9;
    double activity = 0.0;
    for (const auto& [pos, coef] : row.terms) {
        activity += a[pos] ? coef : 0.0;
    }
    const double scale = std::max(1.0, std::abs(row.rhs));
    switch (row.sense) {
    case RowSense::less_equal: return activity <= row.rhs + kTol * scale;
    case RowSense::greater_equal: return activity >= row.rhs - kTol * scale;
    case RowSense::equal: return std::abs(activity - row.rhs) <= kTol * scale;
    }
    return true;
}

}  // namespace

OracleResult enumerate_optimum(const MilpModel& model, const OracleOptions& options)
{
    const auto ids = model.binary_ids();
    const int k = static_cast<int>(ids.size());
    if (k > options.max_binaries) {
        throw TooManyBinaries("too-many-binaries: model has " + std::to_string(k) + " binaries, limit " +
                              std::to_string(options.max_binaries));
    }

    std::unordered_map<int, int> position;
    for (int j = 0; j < k; ++j) {
        position[ids[j]] = j;
    }
    std::vector<PureRow> pure;
    std::vector<std::pair<int, std::uint8_t>> fixed;  // binaries with lower == upper
    if (options.prune) {
        for (const auto& row : model.constraints()) {
            const bool all_binary = std::all_of(row.terms.begin(), row.terms.end(),
                                                [&](const Term& t) { return position.count(t.var) > 0; });
            if (!all_binary) {
                continue;
            }
            PureRow p{{}, row.sense, row.rhs};
            for (const auto& t : row.terms) {
                p.terms.emplace_back(position[t.var], t.coef);
            }
            pure.push_back(std::move(p));
        }
        for (int j = 0; j < k; ++j) {
            const auto& v = model.variables()[ids[j]];
            if (v.lower > 0.5) {
                fixed.emplace_back(j, 1);
            } else if (v.upper < 0.5) {
                fixed.emplace_back(j, 0);
            }
        }
    }

    const int inner = std::clamp(options.block_bits, 0, k);
    const int outer = k - inner;
    // Rows and fixings that only involve outer binaries can reject a whole block.
    std::vector<const PureRow*> outer_rows;
    for (const auto& r : pure) {
        if (std::all_of(r.terms.begin(), r.terms.end(), [&](const auto& t) { return t.first < outer; })) {
            outer_rows.push_back(&r);
        }
    }
    const auto passes = [&](const std::vector<std::uint8_t>& a, bool outer_only) {
        for (const auto& [pos, v] : fixed) {
            if ((!outer_only || pos < outer) && a[pos] != v) {
                return false;
            }
        }
        if (outer_only) {
            return std::all_of(outer_rows.begin(), outer_rows.end(), [&](const PureRow* r) { return satisfied(*r, a); });
        }
        return std::all_of(pure.begin(), pure.end(), [&](const PureRow& r) { return satisfied(r, a); });
    };

    solver::FixedBinaryLp lp(model, options.lp_options);
    OracleResult result;
    std::vector<std::uint8_t> a(k, 0);
    std::vector<std::int8_t> partial(k, solver::FixedBinaryLp::kRelaxed);
    const std::uint64_t outer_total = std::uint64_t{1} << outer;
    const std::uint64_t inner_total = std::uint64_t{1} << inner;
    // Gray-code order: consecutive assignments differ in one bit, which keeps
    // the LP hot start close.
    for (std::uint64_t i = 0; i < outer_total; ++i) {
        const std::uint64_t gray = i ^ (i >> 1);
        for (int j = 0; j < outer; ++j) {
            a[j] = static_cast<std::uint8_t>((gray >> j) & 1u);
        }
        if (inner > 0) {
            if (options.prune && !passes(a, true)) {
                result.pruned += static_cast<long>(inner_total);
                continue;
            }
            std::copy(a.begin(), a.begin() + outer, partial.begin());
            const auto bound = lp.solve_partial(partial);
            ++result.bound_solves;
            const bool hopeless =
                bound.status != solver::SolveStatus::optimal ||
                (result.feasible &&
                 bound.objective > result.best_objective + 1e-7 * std::max(1.0, std::abs(result.best_objective)));
            if (hopeless) {
                ++result.skipped_blocks;
                continue;
            }
        }
        for (std::uint64_t m = 0; m < inner_total; ++m) {
            const std::uint64_t g = m ^ (m >> 1);
            for (int j = 0; j < inner; ++j) {
                a[outer + j] = static_cast<std::uint8_t>((g >> j) & 1u);
            }
            if (options.prune && !passes(a, false)) {
                ++result.pruned;
                continue;
            }
            const auto out = lp.solve(a);
            ++result.evaluated;
            if (out.status != solver::SolveStatus::optimal) {
                ++result.infeasible;
                continue;
            }
            bool better = !result.feasible;
            if (!better) {
                const double tol = 1e-9 * std::max(1.0, std::abs(result.best_objective));
                better = out.objective < result.best_objective - tol ||
                         (std::abs(out.objective - result.best_objective) <= tol &&
                          std::lexicographical_compare(a.begin(), a.end(), result.best_assignment.begin(),
                                                       result.best_assignment.end()));
            }
            if (better) {
                result.feasible = true;
                result.best_objective = out.objective;
                result.best_assignment = a;
                result.best_values = out.values;
            }
        }
    }
    return result;
}

}  // namespace mgplan::oracle
