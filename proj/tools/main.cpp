// Command line front end: solve, aggregate, spatial, bench, synth, export-mps.

#include "lopf/csv.hpp"
#include "lopf/harness.hpp"
#include "lopf/indicators.hpp"
#include "lopf/lpmodel.hpp"
#include "lopf/mps.hpp"
#include "lopf/network.hpp"
#include "lopf/simplex.hpp"
#include "lopf/spatial.hpp"
#include "lopf/tsam.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace lopf;

namespace {

SolveResult solve_lp(const LpProblem& lp, int threads) {
    const char* env = std::getenv("TSAM_LOPF_SOLVER");
    if (env != nullptr && *env != '\0') return solve_external(lp, env, threads);
    SolveResult r = solve(lp);
    if (r.status != SolveStatus::optimal)
        throw LpError("solver did not reach optimality");
    return r;
}

void write_dispatch(const fs::path& dir, const Network& net, const DispatchResult& res) {
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "dispatch_generators.csv");
        out << "t";
        for (const auto& [id, series] : res.generator_dispatch) out << ',' << id;
        out << '\n';
        for (std::size_t t = 0; t < res.weights.size(); ++t) {
            out << t;
            for (const auto& [id, series] : res.generator_dispatch)
                out << ',' << csv::format_double(series[t]);
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "dispatch_storage.csv");
        out << "id,built_power,built_energy\n";
        for (const auto& [id, s] : res.storage)
            out << id << ',' << csv::format_double(s.built_power) << ','
                << csv::format_double(s.built_energy) << '\n';
    }
    {
        std::ofstream out(dir / "dispatch_soc.csv");
        out << "t";
        for (const auto& [id, s] : res.storage) out << ',' << id;
        out << '\n';
        for (int t = 0; t < res.soc_hours; ++t) {
            out << t;
            for (const auto& [id, s] : res.storage)
                out << ',' << csv::format_double(s.soc[static_cast<std::size_t>(t)]);
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "dispatch_flows.csv");
        out << "t";
        for (const auto& [id, series] : res.line_flow) out << ',' << id;
        out << '\n';
        for (std::size_t t = 0; t < res.weights.size(); ++t) {
            out << t;
            for (const auto& [id, series] : res.line_flow)
                out << ',' << csv::format_double(series[t]);
            out << '\n';
        }
    }
    (void)net;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time series aggregation for DC optimal power flow with storage"};
    app.require_subcommand(1);
    std::string format = "csv";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* cmd_solve = app.add_subcommand("solve", "Solve a network directory");
    std::string solve_dir, solve_out = ".";
    int threads = 1;
    cmd_solve->add_option("dir", solve_dir, "Network directory")->required();
    cmd_solve->add_option("--out", solve_out, "Directory for dispatch CSVs");
    cmd_solve->add_option("--threads", threads, "External solver threads");

    auto* cmd_agg = app.add_subcommand("aggregate", "Aggregate a network's time series");
    std::string agg_dir, agg_method, agg_out = "aggregated";
    int agg_k = 1;
    cmd_agg->add_option("dir", agg_dir)->required();
    cmd_agg->add_option("--method", agg_method, "chronological or coupling_days")->required();
    cmd_agg->add_option("--k", agg_k, "Number of representative periods")->required();
    cmd_agg->add_option("--out", agg_out, "Output directory");

    auto* cmd_spatial = app.add_subcommand("spatial", "Reduce the network spatially");
    std::string sp_dir, sp_out = "reduced";
    int sp_k = 1;
    std::uint64_t sp_seed = 0;
    cmd_spatial->add_option("dir", sp_dir)->required();
    cmd_spatial->add_option("--k", sp_k, "Number of clusters")->required();
    cmd_spatial->add_option("--seed", sp_seed, "Clustering seed");
    cmd_spatial->add_option("--out", sp_out, "Output directory");

    auto* cmd_bench = app.add_subcommand("bench", "Run an experiment sweep");
    std::string bench_config;
    cmd_bench->add_option("config", bench_config, "Experiment config file")->required();

    auto* cmd_synth = app.add_subcommand("synth", "Write a synthetic network");
    int sy_buses = 3, sy_hours = 168;
    std::uint64_t sy_seed = 1;
    std::string sy_out;
    cmd_synth->add_option("--buses", sy_buses)->required();
    cmd_synth->add_option("--hours", sy_hours)->required();
    cmd_synth->add_option("--seed", sy_seed);
    cmd_synth->add_option("--out", sy_out)->required();

    auto* cmd_mps = app.add_subcommand("export-mps", "Export the reference LP as MPS");
    std::string mps_dir, mps_out;
    cmd_mps->add_option("dir", mps_dir)->required();
    cmd_mps->add_option("--out", mps_out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_solve) {
            Network net = load_network(solve_dir);
            auto desc = AggregationDescriptor::identity(net.snapshots.count());
            auto res = solve_lp(build_lp(net, desc), threads);
            auto dispatch = extract_solution(net, desc, res);
            write_dispatch(solve_out, net, dispatch);
            if (format == "json") {
                nlohmann::ordered_json j;
                j["objective"] = dispatch.objective;
                j["iterations"] = res.iterations;
                j["wall_seconds"] = res.wall_seconds;
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "objective," << csv::format_double(dispatch.objective) << '\n';
            }
        } else if (*cmd_agg) {
            auto method = aggregation_method_from_string(agg_method);
            if (!method || *method == AggregationMethod::none)
                throw NetworkError("unknown method " + agg_method);
            Network net = load_network(agg_dir);
            auto [agg, desc] = aggregate(net, *method, agg_k);
            save_network(agg, agg_out);
            std::ofstream(fs::path(agg_out) / "descriptor.json") << desc.to_json() << '\n';
            std::cout << "k," << desc.k() << '\n';
        } else if (*cmd_spatial) {
            Network net = load_network(sp_dir);
            auto assignment = kmeans_buses(net, sp_k, sp_seed);
            save_network(reduce_network(net, assignment), sp_out);
            std::cout << "buses," << sp_k << '\n';
        } else if (*cmd_bench) {
            if (!fs::exists(bench_config)) {
                std::cerr << "bench: no such config file: " << bench_config << '\n';
                return 2;
            }
            auto config = ExperimentConfig::load(bench_config);
            auto reports = run_experiment(config);
            emit_plot_data(reports, config.output_dir);
            if (format == "json") {
                std::cout << "[\n";
                for (std::size_t i = 0; i < reports.size(); ++i)
                    std::cout << reports[i].to_json() << (i + 1 < reports.size() ? ",\n" : "\n");
                std::cout << "]\n";
            } else {
                std::cout << IndicatorReport::csv_header() << '\n';
                for (const auto& r : reports) std::cout << r.csv_row() << '\n';
            }
        } else if (*cmd_synth) {
            save_network(synthesize_network(sy_buses, sy_hours, sy_seed), sy_out);
            std::cout << "written," << sy_out << '\n';
        } else if (*cmd_mps) {
            Network net = load_network(mps_dir);
            auto desc = AggregationDescriptor::identity(net.snapshots.count());
            auto doc = export_mps(build_lp(net, desc));
            std::ofstream out(mps_out);
            if (!out) throw NetworkError("cannot write " + mps_out);
            out << doc.text;
            std::cout << "written," << mps_out << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
