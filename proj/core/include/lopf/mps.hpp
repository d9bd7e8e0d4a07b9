#pragma once

#include "lopf/lp.hpp"
#include "lopf/simplex.hpp"

#include <map>
#include <string>

namespace lopf {

struct MpsParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MpsDocument {
    std::string text;
    // original variable name -> mangled (<= 8 chars) name, bijective
    std::map<std::string, std::string> name_map;
};

// Fixed-format MPS (fields at columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61).
MpsDocument export_mps(const LpProblem& lp);

// Inverse of export_mps on its own output; variable names are the mangled ones.
LpProblem import_mps(const std::string& text);

// Runs an external solver via a command template with {mps} and {sol}
// placeholders; the solution file holds one "name value" pair per line.
// Thread count is recorded and forwarded via an optional {threads} placeholder.
SolveResult solve_external(const LpProblem& lp, const std::string& command_template,
                           int threads = 1);

}  // namespace lopf
