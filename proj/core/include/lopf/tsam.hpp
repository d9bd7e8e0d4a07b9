#pragma once

#include "lopf/lpmodel.hpp"
#include "lopf/network.hpp"

#include <utility>
#include <vector>

namespace lopf {

enum class FeatureKind { load, wind, solar };

// Concatenated load/wind/solar feature block, normalized for clustering.
// Loads are scaled per column (max over time at each bus), generation per
// carrier across all buses; the original physical values are kept so the
// inverse transform is exact.
struct TimeSeriesMatrix {
    int hours = 0;
    std::vector<std::string> component;       // per column
    std::vector<FeatureKind> kind;            // per column
    std::vector<double> scale;                // per column, 0 for all-zero columns
    std::vector<std::vector<double>> normalized;  // [column][t]
    std::vector<std::vector<double>> original;    // [column][t], physical units

    int columns() const { return static_cast<int>(normalized.size()); }
};

TimeSeriesMatrix normalize(const Network& net, bool per_carrier = true);

enum class Adjacency { none, chain };

struct ClusterAssignment {
    int n_periods = 0;
    int k = 0;
    std::vector<int> labels;  // per period, in [0,k)
    struct Merge {
        int a, b;     // period indices of cluster representatives at merge time
        double cost;  // within-cluster variance increase
    };
    std::vector<Merge> history;
};

// Agglomerative Ward clustering of consecutive period vectors; adjacency=chain
// restricts merges to temporally adjacent clusters.
ClusterAssignment ward_cluster(const TimeSeriesMatrix& matrix, int period_length, int k,
                               Adjacency adjacency);

// Per cluster, the member period closest (Euclidean) to the cluster mean;
// ties go to the smallest period index.
std::vector<int> select_medoids(const ClusterAssignment& assignment,
                                const TimeSeriesMatrix& matrix, int period_length);

AggregationDescriptor make_descriptor(const ClusterAssignment& assignment,
                                      const std::vector<int>& medoids, int period_length);

// Representative series in physical units, [column][representative hour].
// Representatives are actual periods, so this is the exact inverse of the
// normalization on those rows.
std::vector<std::vector<double>> rescale(const TimeSeriesMatrix& matrix,
                                         const std::vector<int>& representatives,
                                         int period_length);

// Reconstruct a full-horizon series from per-representative values.
std::vector<double> expand(const AggregationDescriptor& desc,
                           const std::vector<double>& representative_series);

// normalize -> ward_cluster -> select_medoids -> make_descriptor -> rescale.
std::pair<Network, AggregationDescriptor> aggregate(const Network& net,
                                                    AggregationMethod method, int k);

}  // namespace lopf
