#include "lopf/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace lopf {

namespace {

double sq(double v) { return v * v; }

double dist2(std::pair<double, double> a, std::pair<double, double> b) {
    return sq(a.first - b.first) + sq(a.second - b.second);
}

}  // namespace

SpatialAssignment kmeans_buses(const Network& net, int k, std::uint64_t seed,
                               bool weight_by_load, int max_iter) {
    const int n = static_cast<int>(net.buses.size());
    if (k < 1 || k > n)
        throw NetworkError("cluster count out of range [1, " + std::to_string(n) + "]");

    std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(n));
    std::vector<double> weight(static_cast<std::size_t>(n), 1.0);
    for (int i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i)] = {net.buses[static_cast<std::size_t>(i)].x,
                                            net.buses[static_cast<std::size_t>(i)].y};
    if (weight_by_load) {
        std::fill(weight.begin(), weight.end(), 0.0);
        for (const auto& l : net.loads) {
            double total = 0;
            for (double d : l.demand) total += d;
            weight[static_cast<std::size_t>(net.bus_index(l.bus))] += total;
        }
        // buses with no load still need a voice or centroids can collapse
        for (double& w : weight)
            if (w == 0.0) w = 1e-9;
    }

    std::mt19937_64 rng(seed);
    SpatialAssignment out;
    out.k = k;
    out.labels.assign(static_cast<std::size_t>(n), 0);

    // k-means++ seeding
    std::vector<std::pair<double, double>> centers;
    {
        std::uniform_int_distribution<int> first(0, n - 1);
        centers.push_back(pts[static_cast<std::size_t>(first(rng))]);
        std::vector<double> d2(static_cast<std::size_t>(n));
        while (static_cast<int>(centers.size()) < k) {
            double total = 0;
            for (int i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& c : centers)
                    best = std::min(best, dist2(pts[static_cast<std::size_t>(i)], c));
                d2[static_cast<std::size_t>(i)] = best * weight[static_cast<std::size_t>(i)];
                total += d2[static_cast<std::size_t>(i)];
            }
            int pick = 0;
            if (total > 0) {
                std::uniform_real_distribution<double> u(0.0, total);
                double r = u(rng), acc = 0;
                for (int i = 0; i < n; ++i) {
                    acc += d2[static_cast<std::size_t>(i)];
                    if (acc >= r) {
                        pick = i;
                        break;
                    }
                    pick = i;
                }
            } else {
                // all points coincide with existing centers
                std::uniform_int_distribution<int> any(0, n - 1);
                pick = any(rng);
            }
            centers.push_back(pts[static_cast<std::size_t>(pick)]);
        }
    }

    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = dist2(pts[static_cast<std::size_t>(i)],
                                 centers[static_cast<std::size_t>(c)]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (out.labels[static_cast<std::size_t>(i)] != best) {
                out.labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        std::vector<double> sx(static_cast<std::size_t>(k), 0.0), sy(static_cast<std::size_t>(k), 0.0),
            sw(static_cast<std::size_t>(k), 0.0);
        for (int i = 0; i < n; ++i) {
            int c = out.labels[static_cast<std::size_t>(i)];
            double w = weight[static_cast<std::size_t>(i)];
            sx[static_cast<std::size_t>(c)] += w * pts[static_cast<std::size_t>(i)].first;
            sy[static_cast<std::size_t>(c)] += w * pts[static_cast<std::size_t>(i)].second;
            sw[static_cast<std::size_t>(c)] += w;
        }
        for (int c = 0; c < k; ++c) {
            if (sw[static_cast<std::size_t>(c)] > 0) {
                centers[static_cast<std::size_t>(c)] = {
                    sx[static_cast<std::size_t>(c)] / sw[static_cast<std::size_t>(c)],
                    sy[static_cast<std::size_t>(c)] / sw[static_cast<std::size_t>(c)]};
            } else {
                // empty cluster: steal the point farthest from its own center
                int far = 0;
                double fd = -1;
                for (int i = 0; i < n; ++i) {
                    double d = dist2(pts[static_cast<std::size_t>(i)],
                                     centers[static_cast<std::size_t>(
                                         out.labels[static_cast<std::size_t>(i)])]);
                    if (d > fd) {
                        fd = d;
                        far = i;
                    }
                }
                out.labels[static_cast<std::size_t>(far)] = c;
                centers[static_cast<std::size_t>(c)] = pts[static_cast<std::size_t>(far)];
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
    }
    out.centroids = centers;
    return out;
}

Network reduce_network(const Network& net, const SpatialAssignment& assignment) {
    const int k = assignment.k;
    auto cluster_of = [&](const std::string& bus_id) {
        return assignment.labels[static_cast<std::size_t>(net.bus_index(bus_id))];
    };
    int width = k < 100 ? 2 : 3;
    auto cluster_id = [width](int c) {
        std::string num = std::to_string(c + 1);
        return "C" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;
    };

    Network out;
    out.snapshots = net.snapshots;
    for (int c = 0; c < k; ++c) {
        Bus b;
        b.id = cluster_id(c);
        b.x = assignment.centroids[static_cast<std::size_t>(c)].first;
        b.y = assignment.centroids[static_cast<std::size_t>(c)].second;
        b.v_nom = net.buses.empty() ? 0.0 : net.buses.front().v_nom;
        out.buses.push_back(std::move(b));
    }

    // unordered cluster pair -> merged line; ratings and susceptances add
    std::map<std::pair<int, int>, Line> merged;
    for (const auto& l : net.lines) {
        int c0 = cluster_of(l.bus0), c1 = cluster_of(l.bus1);
        if (c0 == c1) continue;
        std::pair<int, int> key = std::minmax(c0, c1);
        auto it = merged.find(key);
        if (it == merged.end()) {
            Line nl;
            nl.id = "line_" + cluster_id(key.first) + "_" + cluster_id(key.second);
            nl.bus0 = cluster_id(key.first);
            nl.bus1 = cluster_id(key.second);
            nl.susceptance = l.susceptance;
            nl.rating = l.rating;
            merged.emplace(key, std::move(nl));
        } else {
            it->second.susceptance += l.susceptance;
            it->second.rating += l.rating;
        }
    }
    for (auto& [key, line] : merged) out.lines.push_back(std::move(line));

    out.generators = net.generators;
    for (auto& g : out.generators) g.bus = cluster_id(cluster_of(g.bus));
    out.storage_units = net.storage_units;
    for (auto& s : out.storage_units) s.bus = cluster_id(cluster_of(s.bus));
    out.loads = net.loads;
    for (auto& l : out.loads) l.bus = cluster_id(cluster_of(l.bus));

    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(out.generators.begin(), out.generators.end(), by_id);
    std::sort(out.storage_units.begin(), out.storage_units.end(), by_id);
    std::sort(out.loads.begin(), out.loads.end(), by_id);
    return out;
}

}  // namespace lopf
