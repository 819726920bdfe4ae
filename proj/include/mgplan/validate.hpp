#pragma once

#include "mgplan/types.hpp"

#include <string>
#include <vector>

namespace mgplan {

/// One broken invariant. `code` is a stable kebab-case identifier
/// (e.g. "efficiency-out-of-range"); `where` names the offending record.
struct Violation {
    std::string code;
    std::string where;
    std::string detail;
};

/// Check every record invariant and series-length agreement.
/// Returns an empty list iff the problem is well formed; never throws.
std::vector<Violation> validate_problem(const PlanningProblem& problem);

/// "code at where: detail" lines joined by newlines.
std::string describe(const std::vector<Violation>& violations);

bool has_violation(const std::vector<Violation>& violations, const std::string& code);

}  // namespace mgplan
