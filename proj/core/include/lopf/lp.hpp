#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lopf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { le, eq, ge };

struct Variable {
    std::string name;
    double lower = 0;
    double upper = kInf;
    double objective = 0;
};

struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    Relation rel = Relation::eq;
    double rhs = 0;
};

struct LpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver-agnostic LP, always minimizing.
struct LpProblem {
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::unordered_map<std::string, int> variable_index;

    int add_variable(std::string name, double lower, double upper, double objective) {
        if (lower > upper)
            throw LpError("variable '" + name + "': lower bound exceeds upper bound");
        auto [it, inserted] =
            variable_index.emplace(name, static_cast<int>(variables.size()));
        if (!inserted) throw LpError("duplicate variable name '" + name + "'");
        variables.push_back({std::move(name), lower, upper, objective});
        return it->second;
    }

    void add_constraint(std::string name, std::vector<std::pair<int, double>> coeffs,
                        Relation rel, double rhs) {
        for (const auto& [idx, coef] : coeffs) {
            (void)coef;
            if (idx < 0 || idx >= static_cast<int>(variables.size()))
                throw LpError("constraint '" + name + "' references unknown variable index");
        }
        constraints.push_back({std::move(name), std::move(coeffs), rel, rhs});
    }

    int variable(const std::string& name) const {
        auto it = variable_index.find(name);
        return it == variable_index.end() ? -1 : it->second;
    }
};

}  // namespace lopf
