#pragma once

#include "lopf/network.hpp"

#include <cstdint>
#include <vector>

namespace lopf {

struct SpatialAssignment {
    int k = 0;
    std::vector<int> labels;  // per bus, in network bus order
    std::vector<std::pair<double, double>> centroids;
};

// k-means on bus coordinates (k-means++ seeding, Lloyd iterations), fully
// deterministic for a given seed. weight_by_load scales each bus by its total
// attached demand.
SpatialAssignment kmeans_buses(const Network& net, int k, std::uint64_t seed,
                               bool weight_by_load = false, int max_iter = 100);

// Collapses each cluster to one bus at its centroid. Parallel inter-cluster
// lines merge (ratings and susceptances sum), intra-cluster lines vanish,
// generators, storage units and loads reattach to their cluster's bus.
Network reduce_network(const Network& net, const SpatialAssignment& assignment);

}  // namespace lopf
