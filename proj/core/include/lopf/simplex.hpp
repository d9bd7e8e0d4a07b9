#pragma once

#include "lopf/lp.hpp"

#include <unordered_map>

namespace lopf {

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(SolveStatus s);

struct SolveOptions {
    double feasibility_tol = 1e-7;
    double optimality_tol = 1e-7;
    long max_iterations = 0;  // 0: automatic (scales with problem size)
};

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0;
    std::unordered_map<std::string, double> values;  // present iff optimal
    double wall_seconds = 0;
    long iterations = 0;
};

// Bounded-variable revised simplex. Dantzig pricing with a switch to
// Bland's rule after 50 stalled iterations; sparse basis factorization
// with product-form updates and periodic refactorization.
SolveResult solve(const LpProblem& lp, const SolveOptions& options = {});

}  // namespace lopf
