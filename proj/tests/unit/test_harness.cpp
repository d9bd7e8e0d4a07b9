#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lopf/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace lopf;

static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

static fs::path temp_dir(const char* tag) {
    auto p = fs::temp_directory_path() / (std::string("lopf_harness_") + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST_CASE("config parsing with comments and lists") {
    auto cfg = ExperimentConfig::parse(
        "# sweep\n"
        "synth_buses = 2\n"
        "synth_hours = 48   # two days\n"
        "synth_seed = 5\n"
        "methods = chronological, coupling_days\n"
        "chronological_k = 12, 48\n"
        "coupling_k = 1,2\n"
        "repetitions = 1\n"
        "output = /tmp/somewhere\n");
    CHECK(cfg.synth_buses == 2);
    CHECK(cfg.synth_hours == 48);
    CHECK(cfg.methods.size() == 2);
    CHECK(cfg.chronological_k == std::vector<int>{12, 48});
    CHECK(cfg.coupling_k == std::vector<int>{1, 2});
    CHECK(cfg.repetitions == 1);
    CHECK(cfg.workers == 1);  // default
    CHECK(cfg.output_dir == "/tmp/somewhere");
}

TEST_CASE("config rejects malformed input") {
    CHECK_THROWS_AS(ExperimentConfig::parse("nonsense\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("unknown_key = 3\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("repetitions = 0\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("synth_hours = abc\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("methods = kmedoids\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("solver = external\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load("/no/such/file.conf"), ConfigError);
}

TEST_CASE("run_experiment produces sorted deterministic reports") {
    ExperimentConfig cfg;
    cfg.synth_buses = 2;
    cfg.synth_hours = 48;
    cfg.synth_seed = 1;
    cfg.methods = {AggregationMethod::chronological, AggregationMethod::coupling_days};
    cfg.chronological_k = {48, 12};
    cfg.coupling_k = {2, 1};
    cfg.repetitions = 1;
    auto out = temp_dir("run");
    cfg.output_dir = out.string();

    auto reports = run_experiment(cfg);
    REQUIRE(reports.size() == 4);
    // sorted by (method, k)
    CHECK(reports[0].method == "chronological");
    CHECK(reports[0].k == 12);
    CHECK(reports[1].k == 48);
    CHECK(reports[2].method == "coupling_days");
    CHECK(reports[2].k == 1);

    // identity cells are exact
    REQUIRE(reports[1].aoe.has_value());
    CHECK(*reports[1].aoe == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    CHECK(*reports[3].aoe == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    REQUIRE(reports[1].pearson_r.at("load").has_value());
    CHECK(*reports[1].pearson_r.at("load") == doctest::Approx(1.0));

    CHECK(fs::exists(out / "reports.csv"));
    auto first = slurp(out / "reports.csv");
    CHECK(first.rfind(IndicatorReport::csv_header(), 0) == 0);

    // timing columns differ run to run, everything else must not
    auto reports2 = run_experiment(cfg);
    REQUIRE(reports2.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(reports2[i].z_agg == reports[i].z_agg);
        CHECK(reports2[i].z_ref == reports[i].z_ref);
        CHECK(reports2[i].aoe == reports[i].aoe);
        CHECK(reports2[i].pearson_r == reports[i].pearson_r);
        CHECK(reports2[i].status == reports[i].status);
    }
}

TEST_CASE("failing cells are recorded and do not abort the sweep") {
    ExperimentConfig cfg;
    cfg.synth_buses = 2;
    cfg.synth_hours = 48;
    cfg.methods = {AggregationMethod::coupling_days};
    cfg.coupling_k = {1, 7};  // 7 > 2 days -> cell failure
    cfg.repetitions = 1;
    auto out = temp_dir("fail");
    cfg.output_dir = out.string();
    auto reports = run_experiment(cfg);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].status == "ok");
    CHECK(reports[1].status == "failed");
    CHECK(!reports[1].aoe.has_value());
}

TEST_CASE("workers > 1 gives the same ordered output") {
    ExperimentConfig cfg;
    cfg.synth_buses = 2;
    cfg.synth_hours = 48;
    cfg.methods = {AggregationMethod::chronological};
    cfg.chronological_k = {6, 12, 24, 48};
    cfg.repetitions = 1;
    auto out1 = temp_dir("w1");
    cfg.output_dir = out1.string();
    auto serial = run_experiment(cfg);
    cfg.workers = 4;
    auto out2 = temp_dir("w4");
    cfg.output_dir = out2.string();
    auto parallel = run_experiment(cfg);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].method == parallel[i].method);
        CHECK(serial[i].k == parallel[i].k);
        CHECK(serial[i].z_agg == parallel[i].z_agg);
    }
}

TEST_CASE("emit_plot_data writes sorted byte-stable CSVs") {
    IndicatorReport a;
    a.method = "coupling_days";
    a.k = 2;
    a.aoe = -0.5;
    a.atr = 50;
    IndicatorReport b;
    b.method = "chronological";
    b.k = 4;
    b.aoe = 1.25;
    b.pearson_r["load"] = 0.9;
    b.shares_pct[Carrier::wind] = 100;
    b.curtailment_pct[Carrier::wind] = 12.5;

    auto out = temp_dir("plot");
    emit_plot_data({a, b}, out.string());
    for (const char* f : {"aoe_vs_k.csv", "atr_vs_k.csv", "pearson_vs_k.csv",
                          "shares_vs_k.csv", "curtailment_vs_k.csv"}) {
        CAPTURE(f);
        CHECK(fs::exists(out / f));
    }
    auto aoe = slurp(out / "aoe_vs_k.csv");
    CHECK(aoe == "method,k,aoe\nchronological,4,1.25\ncoupling_days,2,-0.5\n");

    auto before = slurp(out / "curtailment_vs_k.csv");
    emit_plot_data({a, b}, out.string());
    CHECK(slurp(out / "curtailment_vs_k.csv") == before);
}
