#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

static int run(const std::string& args) {
    std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

static std::string fixture(const char* name) {
    return (fs::path(FIXTURE_DIR) / name).string();
}

TEST_CASE("solve succeeds on a valid fixture") {
    auto out = fs::temp_directory_path() / "lopf_cli_solve";
    fs::remove_all(out);
    CHECK(run("solve " + fixture("two_bus") + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "dispatch_generators.csv"));
    CHECK(fs::exists(out / "dispatch_storage.csv"));
}

TEST_CASE("domain errors exit 1") {
    CHECK(run("solve " + fixture("bad_ref")) == 1);
    // only 1 day in a 24 h horizon
    CHECK(run("aggregate " + fixture("two_bus") +
              " --method coupling_days --k 2 --out /tmp/lopf_cli_agg") == 1);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("bench /no/such/config.toml") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("solve") == 2);  // missing required argument
    CHECK(run("solve dir --format yaml") == 2);
}

TEST_CASE("aggregate and spatial write usable outputs") {
    auto agg = fs::temp_directory_path() / "lopf_cli_agg_ok";
    fs::remove_all(agg);
    CHECK(run("aggregate " + fixture("two_bus") + " --method chronological --k 6 --out " +
              agg.string()) == 0);
    CHECK(fs::exists(agg / "snapshots.csv"));
    CHECK(fs::exists(agg / "descriptor.json"));
    CHECK(run("solve " + agg.string() + " --out " + (agg / "solved").string()) == 0);

    auto red = fs::temp_directory_path() / "lopf_cli_red";
    fs::remove_all(red);
    CHECK(run("spatial " + fixture("two_bus") + " --k 1 --seed 1 --out " + red.string()) ==
          0);
    CHECK(run("solve " + red.string() + " --out " + (red / "solved").string()) == 0);
}

TEST_CASE("synth and export-mps") {
    auto dir = fs::temp_directory_path() / "lopf_cli_synth";
    fs::remove_all(dir);
    CHECK(run("synth --buses 2 --hours 24 --seed 9 --out " + dir.string()) == 0);
    auto mps = fs::temp_directory_path() / "lopf_cli.mps";
    CHECK(run("export-mps " + dir.string() + " --out " + mps.string()) == 0);
    CHECK(fs::file_size(mps) > 100);
}
