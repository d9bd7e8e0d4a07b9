#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lopf/indicators.hpp"
#include "lopf/lpmodel.hpp"
#include "lopf/network.hpp"
#include "lopf/simplex.hpp"
#include "lopf/tsam.hpp"

#include <cmath>
#include <filesystem>

using namespace lopf;

TEST_CASE("aoe sign convention and zero case") {
    CHECK(aoe_percent(100, 100) == 0);
    // denominator and minuend are the aggregated objective
    CHECK(aoe_percent(99, 100) == doctest::Approx(1.0));
    CHECK(aoe_percent(100, 99) < 0);  // underestimate -> negative
    CHECK_THROWS_AS(aoe_percent(1, 0), std::invalid_argument);
}

TEST_CASE("atr") {
    CHECK(atr_percent(100, 100) == 0);
    CHECK(atr_percent(100, 12) == doctest::Approx(88.0));
    CHECK(atr_percent(10, 20) == doctest::Approx(-100.0));  // slowdown
    CHECK_THROWS_AS(atr_percent(0, 1), std::invalid_argument);
}

TEST_CASE("pearson basics") {
    std::vector<double> a{1, 2, 3};
    CHECK(*pearson(a, a) == doctest::Approx(1.0));
    std::vector<double> neg{-1, -2, -3};
    CHECK(*pearson(a, neg) == doctest::Approx(-1.0));
    std::vector<double> b{1, 2, 4};
    CHECK(*pearson(a, b) == doctest::Approx(0.9819805060619659));
    CHECK(!pearson(a, {5, 5, 5}).has_value());
    CHECK_THROWS_AS(pearson(a, {1, 2}), std::invalid_argument);
}

TEST_CASE("pearson is invariant under positive affine transforms") {
    std::vector<double> a{3, 1, 4, 1, 5, 9, 2, 6};
    std::vector<double> b{2, 7, 1, 8, 2, 8, 1, 8};
    auto r = *pearson(a, b);
    std::vector<double> a2(a.size()), b2(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a2[i] = 2.5 * a[i] + 17.0;
        b2[i] = 0.3 * b[i] - 4.0;
    }
    CHECK(*pearson(a2, b2) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("identity aggregation gives pearson 1 per carrier") {
    auto net = synthesize_network(2, 48, 3);
    auto [agg, desc] = aggregate(net, AggregationMethod::chronological, 48);
    auto r = pearson_carriers(net, agg, desc);
    for (const auto& key : {"load", "wind", "solar"}) {
        REQUIRE(r.at(key).has_value());
        CHECK(*r.at(key) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

static DispatchResult solved(const Network& net, const AggregationDescriptor& desc) {
    auto raw = solve(build_lp(net, desc));
    REQUIRE(raw.status == SolveStatus::optimal);
    return extract_solution(net, desc, raw);
}

TEST_CASE("curtailment bounds and independent recomputation") {
    auto net = load_network(std::filesystem::path(FIXTURE_DIR) / "two_bus");
    auto desc = AggregationDescriptor::identity(24);
    auto res = solved(net, desc);
    auto cur = curtailment(net, res);
    REQUIRE(cur.count(Carrier::wind) == 1);
    REQUIRE(cur.at(Carrier::wind).has_value());
    double c = *cur.at(Carrier::wind);
    CHECK(c >= 0);
    CHECK(c <= 100);

    // recompute from the raw series
    double avail = 0, used = 0;
    const auto& g = net.generators[1];
    REQUIRE(g.id == "wind_B01");
    for (int t = 0; t < 24; ++t) {
        avail += g.availability_at(t) * res.generator_capacity.at(g.id);
        used += res.generator_dispatch.at(g.id)[static_cast<std::size_t>(t)];
    }
    CHECK(c == doctest::Approx((avail - used) / avail * 100.0).epsilon(1e-9));
}

TEST_CASE("curtailment trivial cases") {
    Network net;
    net.snapshots = Snapshots::hourly(2);
    net.buses = {{"B01", 0, 0, 380}};
    Generator g{"wind_B01", "B01", Carrier::wind, 10, 10, true, 0, 0,
                std::vector<double>{0.5, 1.0}};
    net.generators = {g};
    DispatchResult res;
    res.weights = {1, 1};
    res.generator_capacity["wind_B01"] = 10;

    res.generator_dispatch["wind_B01"] = {5, 10};  // dispatch == availability
    CHECK(*curtailment(net, res).at(Carrier::wind) == doctest::Approx(0.0));

    res.generator_dispatch["wind_B01"] = {0, 0};
    CHECK(*curtailment(net, res).at(Carrier::wind) == doctest::Approx(100.0));

    (*net.generators[0].availability) = {0, 0};
    CHECK(!curtailment(net, res).at(Carrier::wind).has_value());
}

TEST_CASE("carrier shares sum to 100 and match a hand pattern") {
    Network net;
    net.snapshots = Snapshots::hourly(1);
    net.buses = {{"B01", 0, 0, 380}};
    net.generators = {{"w", "B01", Carrier::wind, 1, 1, true, 0, 0, std::nullopt},
                      {"s", "B01", Carrier::solar, 1, 1, true, 0, 0, std::nullopt},
                      {"g", "B01", Carrier::gas, 1, 1, true, 0, 0, std::nullopt}};
    DispatchResult res;
    res.weights = {1};
    // two carriers at 9.49 and 1.38 units of a 13.25 total
    res.generator_dispatch["w"] = {9.49};
    res.generator_dispatch["s"] = {1.38};
    res.generator_dispatch["g"] = {13.25 - 9.49 - 1.38};
    res.generator_capacity["w"] = res.generator_capacity["s"] =
        res.generator_capacity["g"] = 1;
    auto sh = carrier_shares(net, res);
    CHECK(sh.at(Carrier::wind) == doctest::Approx(71.6226).epsilon(1e-3));
    CHECK(sh.at(Carrier::solar) == doctest::Approx(10.4151).epsilon(1e-3));
    double total = 0;
    for (const auto& [c, v] : sh) total += v;
    CHECK(total == doctest::Approx(100.0).epsilon(1e-9));

    res.generator_dispatch["s"] = {0};
    res.generator_dispatch["g"] = {0};
    res.generator_dispatch["w"] = {5};
    CHECK(carrier_shares(net, res).at(Carrier::wind) == doctest::Approx(100.0));

    res.generator_dispatch["w"] = {0};
    CHECK_THROWS_AS(carrier_shares(net, res), std::invalid_argument);
}

TEST_CASE("report CSV row matches the pinned header") {
    IndicatorReport rep;
    rep.method = "chronological";
    rep.k = 4;
    rep.aoe = -1.5;
    rep.atr = 90.0;
    rep.pearson_r["load"] = 0.99;
    rep.shares_pct[Carrier::wind] = 60;
    rep.shares_pct[Carrier::solar] = 40;
    auto header = IndicatorReport::csv_header();
    auto header_fields = std::count(header.begin(), header.end(), ',');
    auto row = rep.csv_row();
    auto row_fields = std::count(row.begin(), row.end(), ',');
    CHECK(header_fields == row_fields);
    CHECK(row.rfind("chronological,4,", 0) == 0);
    CHECK(row.find("failed") == std::string::npos);

    auto j = rep.to_json();
    CHECK(j.find("\"one_minus_pearson_load\"") != std::string::npos);
    CHECK(j.find("\"aoe\"") != std::string::npos);
}
