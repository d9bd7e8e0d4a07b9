#include "lopf/harness.hpp"

#include "lopf/csv.hpp"
#include "lopf/lpmodel.hpp"
#include "lopf/mps.hpp"
#include "lopf/spatial.hpp"
#include "lopf/tsam.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace lopf {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for " + key + ": " + value);
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "network") {
            cfg.network_path = value;
        } else if (key == "synth_buses") {
            cfg.synth_buses = parse_int(key, value);
        } else if (key == "synth_hours") {
            cfg.synth_hours = parse_int(key, value);
        } else if (key == "synth_seed") {
            cfg.synth_seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "methods") {
            for (const auto& m : split_list(value)) {
                auto parsed = aggregation_method_from_string(m);
                if (!parsed || *parsed == AggregationMethod::none)
                    throw ConfigError("unknown method: " + m);
                cfg.methods.push_back(*parsed);
            }
        } else if (key == "chronological_k") {
            for (const auto& v : split_list(value))
                cfg.chronological_k.push_back(parse_int(key, v));
        } else if (key == "coupling_k") {
            for (const auto& v : split_list(value))
                cfg.coupling_k.push_back(parse_int(key, v));
        } else if (key == "spatial_k") {
            cfg.spatial_k = parse_int(key, value);
        } else if (key == "spatial_seed") {
            cfg.spatial_seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "solver") {
            cfg.solver = value;
        } else if (key == "solver_command") {
            cfg.solver_command = value;
        } else if (key == "threads") {
            cfg.threads = parse_int(key, value);
        } else if (key == "output") {
            cfg.output_dir = value;
        } else if (key == "repetitions") {
            cfg.repetitions = parse_int(key, value);
        } else if (key == "workers") {
            cfg.workers = parse_int(key, value);
        } else if (key == "seed") {
            cfg.synth_seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + key);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("missing file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (solver != "builtin" && solver != "external")
        throw ConfigError("solver must be builtin or external");
    if (solver == "external" && solver_command.empty() &&
        std::getenv("TSAM_LOPF_SOLVER") == nullptr)
        throw ConfigError("external solver requires solver_command");
    for (int k : chronological_k)
        if (k < 1) throw ConfigError("chronological_k values must be positive");
    for (int k : coupling_k)
        if (k < 1) throw ConfigError("coupling_k values must be positive");
}

namespace {

struct Cell {
    AggregationMethod method;
    int k;
};

SolveResult solve_with(const ExperimentConfig& cfg, const LpProblem& lp) {
    const char* env = std::getenv("TSAM_LOPF_SOLVER");
    if (env != nullptr && *env != '\0') return solve_external(lp, env, cfg.threads);
    if (cfg.solver == "external") return solve_external(lp, cfg.solver_command, cfg.threads);
    SolveResult r = solve(lp);
    if (r.status != SolveStatus::optimal)
        throw LpError("built-in solver did not reach optimality");
    return r;
}

// repeated timed solves; values from the first run, time the median
SolveResult timed_solve(const ExperimentConfig& cfg, const LpProblem& lp) {
    std::vector<double> times;
    SolveResult first;
    for (int r = 0; r < cfg.repetitions; ++r) {
        SolveResult res = solve_with(cfg, lp);
        times.push_back(res.wall_seconds);
        if (r == 0) first = std::move(res);
    }
    first.wall_seconds = median(std::move(times));
    return first;
}

}  // namespace

void write_reports_csv(const std::vector<IndicatorReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path);
    out << IndicatorReport::csv_header() << '\n';
    for (const auto& r : reports) out << r.csv_row() << '\n';
}

std::vector<IndicatorReport> run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);

    Network net = config.network_path.empty()
                      ? synthesize_network(config.synth_buses, config.synth_hours,
                                           config.synth_seed)
                      : load_network(config.network_path);
    if (config.spatial_k > 0) {
        auto assignment = kmeans_buses(net, config.spatial_k, config.spatial_seed);
        net = reduce_network(net, assignment);
    }

    const int T = net.snapshots.count();

    // reference solved first and alone so its timing is uncontended
    auto identity = AggregationDescriptor::identity(T);
    LpProblem ref_lp = build_lp(net, identity);
    SolveResult ref = timed_solve(config, ref_lp);
    const double z_ref = ref.objective;
    const double t_ref = ref.wall_seconds;

    std::vector<Cell> cells;
    for (auto m : config.methods) {
        const auto& ks = m == AggregationMethod::chronological ? config.chronological_k
                                                               : config.coupling_k;
        for (int k : ks) cells.push_back({m, k});
    }

    std::vector<IndicatorReport> reports(cells.size());
    std::mutex mu;
    std::size_t next = 0;
    std::size_t done = 0;
    const std::string csv_path = (fs::path(config.output_dir) / "reports.csv").string();

    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                if (next >= cells.size()) return;
                i = next++;
            }
            IndicatorReport rep;
            rep.method = std::string(to_string(cells[i].method));
            rep.k = cells[i].k;
            rep.z_ref = z_ref;
            rep.t_ref_s = t_ref;
            try {
                auto prep_start = std::chrono::steady_clock::now();
                auto [agg_net, desc] = aggregate(net, cells[i].method, cells[i].k);
                LpProblem lp = build_lp(agg_net, desc);
                rep.t_prep_s = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - prep_start)
                                   .count();
                SolveResult res = timed_solve(config, lp);
                auto dispatch = extract_solution(agg_net, desc, res);
                rep.z_agg = res.objective;
                rep.t_agg_s = res.wall_seconds;
                rep.aoe = aoe_percent(z_ref, res.objective);
                rep.atr = atr_percent(t_ref, res.wall_seconds);
                rep.pearson_r = pearson_carriers(net, agg_net, desc);
                rep.curtailment_pct = curtailment(agg_net, dispatch);
                rep.shares_pct = carrier_shares(agg_net, dispatch);
            } catch (const std::exception&) {
                rep.status = "failed";
            }
            {
                std::lock_guard lock(mu);
                reports[i] = std::move(rep);
                ++done;
                std::vector<IndicatorReport> finished;
                for (const auto& r : reports)
                    if (!r.method.empty()) finished.push_back(r);
                std::sort(finished.begin(), finished.end(),
                          [](const IndicatorReport& a, const IndicatorReport& b) {
                              return std::tie(a.method, a.k) < std::tie(b.method, b.k);
                          });
                write_reports_csv(finished, csv_path);
            }
        }
    };

    int nworkers = std::min<int>(config.workers, static_cast<int>(cells.size()));
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(reports.begin(), reports.end(),
              [](const IndicatorReport& a, const IndicatorReport& b) {
                  return std::tie(a.method, a.k) < std::tie(b.method, b.k);
              });
    write_reports_csv(reports, csv_path);
    return reports;
}

void emit_plot_data(const std::vector<IndicatorReport>& reports, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto sorted = reports;
    std::sort(sorted.begin(), sorted.end(),
              [](const IndicatorReport& a, const IndicatorReport& b) {
                  return std::tie(a.method, a.k) < std::tie(b.method, b.k);
              });

    auto open = [&](const char* name) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::trunc);
        if (!out) throw ConfigError(std::string("cannot write ") + name);
        return out;
    };
    auto cell = [](const std::optional<double>& v) {
        return v ? csv::format_double(*v) : std::string();
    };

    {
        auto out = open("aoe_vs_k.csv");
        out << "method,k,aoe\n";
        for (const auto& r : sorted)
            out << r.method << ',' << r.k << ',' << cell(r.aoe) << '\n';
    }
    {
        auto out = open("atr_vs_k.csv");
        out << "method,k,atr\n";
        for (const auto& r : sorted)
            out << r.method << ',' << r.k << ',' << cell(r.atr) << '\n';
    }
    {
        auto out = open("pearson_vs_k.csv");
        out << "method,k,pearson_load,pearson_wind,pearson_solar\n";
        for (const auto& r : sorted) {
            auto get = [&r](const char* key) -> std::optional<double> {
                auto it = r.pearson_r.find(key);
                return it == r.pearson_r.end() ? std::nullopt : it->second;
            };
            out << r.method << ',' << r.k << ',' << cell(get("load")) << ','
                << cell(get("wind")) << ',' << cell(get("solar")) << '\n';
        }
    }
    {
        auto out = open("shares_vs_k.csv");
        out << "method,k";
        for (Carrier c : all_carriers) out << ",share_" << to_string(c);
        out << '\n';
        for (const auto& r : sorted) {
            out << r.method << ',' << r.k;
            for (Carrier c : all_carriers) {
                auto it = r.shares_pct.find(c);
                out << ',';
                if (it != r.shares_pct.end()) out << csv::format_double(it->second);
            }
            out << '\n';
        }
    }
    {
        auto out = open("curtailment_vs_k.csv");
        out << "method,k,curtailment_wind,curtailment_solar\n";
        for (const auto& r : sorted) {
            auto get = [&r](Carrier c) -> std::optional<double> {
                auto it = r.curtailment_pct.find(c);
                return it == r.curtailment_pct.end() ? std::nullopt : it->second;
            };
            out << r.method << ',' << r.k << ',' << cell(get(Carrier::wind)) << ','
                << cell(get(Carrier::solar)) << '\n';
        }
    }
}

}  // namespace lopf
