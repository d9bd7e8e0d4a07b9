#pragma once

#include "lopf/indicators.hpp"
#include "lopf/network.hpp"
#include "lopf/simplex.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lopf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment sweep description. Parsed from a line-based "key = value" file;
// '#' starts a comment, blank lines are skipped, lists are comma separated.
struct ExperimentConfig {
    std::string network_path;  // directory of CSVs; empty means synthesize
    int synth_buses = 3;
    int synth_hours = 168;
    std::uint64_t synth_seed = 1;

    std::vector<AggregationMethod> methods;
    std::vector<int> chronological_k;
    std::vector<int> coupling_k;

    int spatial_k = 0;  // 0 disables spatial reduction
    std::uint64_t spatial_seed = 0;

    std::string solver = "builtin";  // "builtin" or "external"
    std::string solver_command;      // template with {mps} {sol} {threads}
    int threads = 1;

    std::string output_dir = ".";
    int repetitions = 3;
    int workers = 1;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    void validate() const;
};

// Solves the reference once (timed alone), then every (method, k) cell;
// cell failures are recorded as status=failed rows and never abort the run.
// Rows come back sorted by (method, k); reports.csv in the output directory
// is rewritten after every completed cell.
std::vector<IndicatorReport> run_experiment(const ExperimentConfig& config);

// Tidy per-indicator CSVs (aoe_vs_k, atr_vs_k, pearson_vs_k, shares_vs_k,
// curtailment_vs_k), one row per (method, k), byte-deterministic.
void emit_plot_data(const std::vector<IndicatorReport>& reports, const std::string& out_dir);

void write_reports_csv(const std::vector<IndicatorReport>& reports, const std::string& path);

}  // namespace lopf
