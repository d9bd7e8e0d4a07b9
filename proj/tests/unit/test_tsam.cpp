#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lopf/network.hpp"
#include "lopf/tsam.hpp"

#include <numeric>
#include <random>

using namespace lopf;

// single-bus-style network carrying one load column with the given series
static Network scalar_net(std::vector<double> series) {
    Network n;
    n.snapshots = Snapshots::hourly(static_cast<int>(series.size()));
    n.buses = {{"B01", 0, 0, 380}, {"B02", 1, 0, 380}};
    Load l;
    l.id = "load_B01";
    l.bus = "B01";
    l.demand = std::move(series);
    n.loads.push_back(std::move(l));
    return n;
}

TEST_CASE("normalize scales loads per column") {
    auto m = normalize(scalar_net({2, 4}));
    REQUIRE(m.columns() == 1);
    CHECK(m.scale[0] == 4);
    CHECK(m.normalized[0] == std::vector<double>{0.5, 1.0});
    CHECK(m.original[0] == std::vector<double>{2, 4});
}

TEST_CASE("normalize uses one constant per generation carrier") {
    Network n = scalar_net({1, 1});
    Generator w1{"wind_B01", "B01", Carrier::wind, 10, 10, true, 0, 0,
                 std::vector<double>{0.2, 0.4}};
    Generator w2{"wind_B02", "B02", Carrier::wind, 10, 10, true, 0, 0,
                 std::vector<double>{0.5, 0.8}};
    n.generators = {w1, w2};
    auto m = normalize(n);
    REQUIRE(m.columns() == 3);
    CHECK(m.kind[1] == FeatureKind::wind);
    CHECK(m.scale[1] == 0.8);  // global max across wind columns
    CHECK(m.scale[2] == 0.8);
    CHECK(m.normalized[1][1] == doctest::Approx(0.5));

    auto shared = normalize(n, false);
    CHECK(shared.scale[1] == 0.8);  // still 0.8: only wind present
}

TEST_CASE("all-zero columns stay zero") {
    auto m = normalize(scalar_net({0, 0, 0}));
    CHECK(m.scale[0] == 0);
    CHECK(m.normalized[0] == std::vector<double>{0, 0, 0});
}

TEST_CASE("unconstrained Ward groups well-separated scalars") {
    auto m = normalize(scalar_net({0, 0.1, 5, 5.1, 9, 9.1}));
    auto a = ward_cluster(m, 1, 3, Adjacency::none);
    CHECK(a.labels == std::vector<int>{0, 0, 1, 1, 2, 2});
    CHECK(a.k == 3);

    auto one = ward_cluster(m, 1, 1, Adjacency::none);
    CHECK(one.labels == std::vector<int>{0, 0, 0, 0, 0, 0});

    auto identity = ward_cluster(m, 1, 6, Adjacency::none);
    CHECK(identity.labels == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("merge costs are non-decreasing without adjacency") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0, 100);
    std::vector<double> series(16);
    for (auto& v : series) v = u(rng);
    auto m = normalize(scalar_net(series));
    auto a = ward_cluster(m, 1, 2, Adjacency::none);
    for (std::size_t i = 1; i < a.history.size(); ++i)
        CHECK(a.history[i].cost >= a.history[i - 1].cost - 1e-12);
}

TEST_CASE("chain clustering yields contiguous segments") {
    for (unsigned long seed = 1; seed <= 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0, 10);
        std::vector<double> series(24);
        for (auto& v : series) v = u(rng);
        auto m = normalize(scalar_net(series));
        auto a = ward_cluster(m, 1, 5, Adjacency::chain);
        CAPTURE(seed);
        for (std::size_t t = 1; t < a.labels.size(); ++t) {
            CHECK(a.labels[t] >= a.labels[t - 1]);
            CHECK(a.labels[t] - a.labels[t - 1] <= 1);
        }
        CHECK(a.labels.back() == 4);
    }
}

TEST_CASE("medoid is the member closest to the mean, ties to smallest index") {
    auto m = normalize(scalar_net({0, 1, 5}));
    auto a = ward_cluster(m, 1, 1, Adjacency::none);
    auto med = select_medoids(a, m, 1);
    CHECK(med == std::vector<int>{1});  // mean 2 -> member 1

    auto m2 = normalize(scalar_net({1, 3, 1, 3}));
    auto a2 = ward_cluster(m2, 1, 1, Adjacency::none);
    CHECK(select_medoids(a2, m2, 1) == std::vector<int>{0});  // tie -> index 0
}

TEST_CASE("descriptor weights count represented hours") {
    auto m = normalize(scalar_net({0, 0.1, 5, 5.1, 9, 9.1}));
    auto a = ward_cluster(m, 1, 3, Adjacency::chain);
    auto med = select_medoids(a, m, 1);
    auto d = make_descriptor(a, med, 1);
    CHECK(d.method == AggregationMethod::chronological);
    CHECK(d.k() == 3);
    CHECK(d.total_weight() == 6);
    CHECK(d.segments.size() == 3);
    CHECK(d.segments[0] == std::pair<int, int>{0, 2});
    for (std::size_t i = 1; i < d.representatives.size(); ++i)
        CHECK(d.representatives[i] > d.representatives[i - 1]);
}

TEST_CASE("rescale returns the stored physical rows bit-exactly") {
    std::vector<double> series{3.7, 11.1, 0.3, 8.8};
    auto m = normalize(scalar_net(series));
    auto rep = rescale(m, {1, 3}, 1);
    CHECK(rep[0][0] == 11.1);
    CHECK(rep[0][1] == 8.8);
}

TEST_CASE("expand repeats segment values over their hours") {
    AggregationDescriptor d;
    d.method = AggregationMethod::chronological;
    d.original_hours = 6;
    d.representatives = {1, 4};
    d.weights = {3, 3};
    d.segments = {{0, 3}, {3, 6}};
    auto full = expand(d, {7.0, 9.0});
    CHECK(full == std::vector<double>{7, 7, 7, 9, 9, 9});
}

TEST_CASE("expand maps coupling days through the day map") {
    AggregationDescriptor d;
    d.method = AggregationMethod::coupling_days;
    d.original_hours = 48;
    d.period_length = 24;
    d.representatives = {0};
    d.weights = {48};
    d.period_map = {0, 0};
    std::vector<double> rep(24);
    std::iota(rep.begin(), rep.end(), 100.0);
    auto full = expand(d, rep);
    REQUIRE(full.size() == 48);
    for (int h = 0; h < 24; ++h) {
        CHECK(full[static_cast<std::size_t>(h)] == 100.0 + h);
        CHECK(full[static_cast<std::size_t>(24 + h)] == 100.0 + h);
    }
}

TEST_CASE("aggregate conserves total weight and samples real periods") {
    auto net = synthesize_network(3, 96, 5);
    for (auto method : {AggregationMethod::chronological, AggregationMethod::coupling_days}) {
        for (int k : {1, 2, 4}) {
            CAPTURE(static_cast<int>(method));
            CAPTURE(k);
            auto [agg, desc] = aggregate(net, method, k);
            CHECK(agg.snapshots.total_hours() == 96);
            CHECK(desc.total_weight() == 96);
            CHECK(validate(agg).empty());
            // each aggregated snapshot is a real original hour
            if (method == AggregationMethod::chronological) {
                for (int p = 0; p < desc.k(); ++p) {
                    int hour = desc.representatives[static_cast<std::size_t>(p)];
                    CHECK(agg.loads[0].demand[static_cast<std::size_t>(p)] ==
                          net.loads[0].demand[static_cast<std::size_t>(hour)]);
                }
            }
        }
    }
}

TEST_CASE("identity aggregation reproduces the original series") {
    auto net = synthesize_network(2, 48, 9);
    auto [agg_h, desc_h] = aggregate(net, AggregationMethod::chronological, 48);
    CHECK(agg_h.loads[0].demand == net.loads[0].demand);
    CHECK(desc_h.weights == std::vector<double>(48, 1.0));

    auto [agg_d, desc_d] = aggregate(net, AggregationMethod::coupling_days, 2);
    CHECK(agg_d.loads[0].demand == net.loads[0].demand);
    CHECK(desc_d.period_map == std::vector<int>{0, 1});
}

TEST_CASE("aggregate rejects out-of-range k") {
    auto net = synthesize_network(2, 48, 1);
    CHECK_THROWS_WITH_AS(aggregate(net, AggregationMethod::coupling_days, 3),
                         doctest::Contains("days"), std::exception);
    CHECK_THROWS_AS(aggregate(net, AggregationMethod::chronological, 49), std::exception);
    CHECK_THROWS_AS(aggregate(net, AggregationMethod::none, 1), std::exception);
}
