#include "lopf/tsam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lopf {

struct TsamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TimeSeriesMatrix normalize(const Network& net, bool per_carrier) {
    TimeSeriesMatrix m;
    m.hours = net.snapshots.count();

    auto add_column = [&m](const std::string& id, FeatureKind kind,
                           std::vector<double> series) {
        m.component.push_back(id);
        m.kind.push_back(kind);
        m.original.push_back(std::move(series));
        m.normalized.emplace_back();
        m.scale.push_back(0.0);
    };

    for (const auto& l : net.loads) add_column(l.id, FeatureKind::load, l.demand);
    for (const auto& g : net.generators)
        if (g.carrier == Carrier::wind && g.availability)
            add_column(g.id, FeatureKind::wind, *g.availability);
    for (const auto& g : net.generators)
        if (g.carrier == Carrier::solar && g.availability)
            add_column(g.id, FeatureKind::solar, *g.availability);

    // load: per-column maximum; generation: one constant per carrier across
    // all buses (or one shared constant when per_carrier is false)
    double wind_max = 0, solar_max = 0;
    for (int c = 0; c < m.columns(); ++c) {
        auto sc = static_cast<std::size_t>(c);
        double mx = 0;
        for (double v : m.original[sc]) mx = std::max(mx, v);
        if (m.kind[sc] == FeatureKind::wind) wind_max = std::max(wind_max, mx);
        if (m.kind[sc] == FeatureKind::solar) solar_max = std::max(solar_max, mx);
        if (m.kind[sc] == FeatureKind::load) m.scale[sc] = mx;
    }
    if (!per_carrier) wind_max = solar_max = std::max(wind_max, solar_max);
    for (int c = 0; c < m.columns(); ++c) {
        auto sc = static_cast<std::size_t>(c);
        if (m.kind[sc] == FeatureKind::wind) m.scale[sc] = wind_max;
        if (m.kind[sc] == FeatureKind::solar) m.scale[sc] = solar_max;
        auto& norm = m.normalized[sc];
        norm.resize(m.original[sc].size());
        if (m.scale[sc] == 0.0) {
            std::fill(norm.begin(), norm.end(), 0.0);  // zero column stays zero
        } else {
            for (std::size_t t = 0; t < norm.size(); ++t)
                norm[t] = m.original[sc][t] / m.scale[sc];
        }
    }
    return m;
}

namespace {

std::vector<std::vector<double>> period_vectors(const TimeSeriesMatrix& m,
                                                int period_length) {
    if (period_length <= 0 || m.hours % period_length != 0)
        throw TsamError("horizon not divisible by period length");
    int n = m.hours / period_length;
    std::vector<std::vector<double>> periods(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        auto& p = periods[static_cast<std::size_t>(d)];
        p.reserve(static_cast<std::size_t>(period_length * m.columns()));
        for (int j = 0; j < period_length; ++j)
            for (int c = 0; c < m.columns(); ++c)
                p.push_back(m.normalized[static_cast<std::size_t>(c)]
                                        [static_cast<std::size_t>(d * period_length + j)]);
    }
    return periods;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

ClusterAssignment ward_cluster(const TimeSeriesMatrix& matrix, int period_length, int k,
                               Adjacency adjacency) {
    auto periods = period_vectors(matrix, period_length);
    const int n = static_cast<int>(periods.size());
    if (k < 1 || k > n) throw TsamError("cluster count out of range [1, " +
                                        std::to_string(n) + "]");

    ClusterAssignment out;
    out.n_periods = n;
    out.k = k;

    std::vector<bool> active(static_cast<std::size_t>(n), true);
    std::vector<int> size(static_cast<std::size_t>(n), 1);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = {i};

    if (adjacency == Adjacency::none) {
        // Lance-Williams update on Ward merge costs (variance increase)
        std::vector<std::vector<double>> cost(static_cast<std::size_t>(n),
                                              std::vector<double>(static_cast<std::size_t>(n),
                                                                  0.0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    sq_dist(periods[static_cast<std::size_t>(i)],
                            periods[static_cast<std::size_t>(j)]) /
                    2.0;

        int clusters = n;
        while (clusters > k) {
            int ba = -1, bb = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) {
                if (!active[static_cast<std::size_t>(i)]) continue;
                for (int j = i + 1; j < n; ++j) {
                    if (!active[static_cast<std::size_t>(j)]) continue;
                    double c = cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    if (c < best) {  // strict: ties keep the earliest pair
                        best = c;
                        ba = i;
                        bb = j;
                    }
                }
            }
            out.history.push_back({ba, bb, best});
            double dab = best;
            int na = size[static_cast<std::size_t>(ba)], nb = size[static_cast<std::size_t>(bb)];
            for (int c = 0; c < n; ++c) {
                if (!active[static_cast<std::size_t>(c)] || c == ba || c == bb) continue;
                int nc = size[static_cast<std::size_t>(c)];
                auto at = [&cost](int x, int y) -> double& {
                    return x < y ? cost[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]
                                 : cost[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
                };
                at(ba, c) = ((na + nc) * at(ba, c) + (nb + nc) * at(bb, c) - nc * dab) /
                            (na + nb + nc);
            }
            size[static_cast<std::size_t>(ba)] += nb;
            active[static_cast<std::size_t>(bb)] = false;
            auto& ma = members[static_cast<std::size_t>(ba)];
            auto& mb = members[static_cast<std::size_t>(bb)];
            ma.insert(ma.end(), mb.begin(), mb.end());
            mb.clear();
            --clusters;
        }
    } else {
        // chain: merges restricted to temporally adjacent clusters, tracked
        // via centroids; cost(A,B) = |A||B|/(|A|+|B|) * ||mu_A - mu_B||^2
        std::vector<std::vector<double>> centroid = periods;
        std::vector<int> next(static_cast<std::size_t>(n)), prev(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            next[static_cast<std::size_t>(i)] = i + 1 < n ? i + 1 : -1;
            prev[static_cast<std::size_t>(i)] = i - 1;
        }
        auto pair_cost = [&](int a, int b) {
            double na = size[static_cast<std::size_t>(a)], nb = size[static_cast<std::size_t>(b)];
            return na * nb / (na + nb) *
                   sq_dist(centroid[static_cast<std::size_t>(a)],
                           centroid[static_cast<std::size_t>(b)]);
        };
        int clusters = n;
        while (clusters > k) {
            int ba = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i != -1 && next[static_cast<std::size_t>(i)] != -1;
                 i = next[static_cast<std::size_t>(i)]) {
                double c = pair_cost(i, next[static_cast<std::size_t>(i)]);
                if (c < best) {
                    best = c;
                    ba = i;
                }
            }
            int bb = next[static_cast<std::size_t>(ba)];
            out.history.push_back({ba, bb, best});
            double na = size[static_cast<std::size_t>(ba)], nb = size[static_cast<std::size_t>(bb)];
            auto& ca = centroid[static_cast<std::size_t>(ba)];
            const auto& cb = centroid[static_cast<std::size_t>(bb)];
            for (std::size_t d = 0; d < ca.size(); ++d)
                ca[d] = (na * ca[d] + nb * cb[d]) / (na + nb);
            size[static_cast<std::size_t>(ba)] += size[static_cast<std::size_t>(bb)];
            auto& ma = members[static_cast<std::size_t>(ba)];
            auto& mb = members[static_cast<std::size_t>(bb)];
            ma.insert(ma.end(), mb.begin(), mb.end());
            mb.clear();
            active[static_cast<std::size_t>(bb)] = false;
            int nn = next[static_cast<std::size_t>(bb)];
            next[static_cast<std::size_t>(ba)] = nn;
            if (nn != -1) prev[static_cast<std::size_t>(nn)] = ba;
            --clusters;
        }
    }

    // labels in time order of each cluster's first period
    std::vector<int> roots;
    for (int i = 0; i < n; ++i)
        if (active[static_cast<std::size_t>(i)]) roots.push_back(i);
    std::vector<std::pair<int, int>> order;  // (min member, root)
    for (int r : roots) {
        const auto& ms = members[static_cast<std::size_t>(r)];
        order.emplace_back(*std::min_element(ms.begin(), ms.end()), r);
    }
    std::sort(order.begin(), order.end());
    out.labels.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t lbl = 0; lbl < order.size(); ++lbl)
        for (int p : members[static_cast<std::size_t>(order[lbl].second)])
            out.labels[static_cast<std::size_t>(p)] = static_cast<int>(lbl);
    return out;
}

std::vector<int> select_medoids(const ClusterAssignment& assignment,
                                const TimeSeriesMatrix& matrix, int period_length) {
    auto periods = period_vectors(matrix, period_length);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(assignment.k));
    for (int p = 0; p < assignment.n_periods; ++p)
        members[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(p)])]
            .push_back(p);

    std::vector<int> medoids(static_cast<std::size_t>(assignment.k), -1);
    for (int c = 0; c < assignment.k; ++c) {
        const auto& ms = members[static_cast<std::size_t>(c)];
        if (ms.empty()) throw TsamError("empty cluster");
        std::vector<double> mean(periods[0].size(), 0.0);
        for (int p : ms)
            for (std::size_t d = 0; d < mean.size(); ++d)
                mean[d] += periods[static_cast<std::size_t>(p)][d];
        for (double& v : mean) v /= static_cast<double>(ms.size());
        double best = std::numeric_limits<double>::infinity();
        for (int p : ms) {  // ascending: ties keep the smallest index
            double d = sq_dist(periods[static_cast<std::size_t>(p)], mean);
            if (d < best) {
                best = d;
                medoids[static_cast<std::size_t>(c)] = p;
            }
        }
    }
    return medoids;
}

AggregationDescriptor make_descriptor(const ClusterAssignment& assignment,
                                      const std::vector<int>& medoids, int period_length) {
    AggregationDescriptor d;
    d.period_length = period_length;
    d.method = period_length == 1 ? AggregationMethod::chronological
                                  : AggregationMethod::coupling_days;
    d.original_hours = assignment.n_periods * period_length;

    std::vector<int> cluster_size(static_cast<std::size_t>(assignment.k), 0);
    for (int lbl : assignment.labels) ++cluster_size[static_cast<std::size_t>(lbl)];

    std::vector<std::pair<int, int>> reps;  // (medoid period, cluster label)
    for (int c = 0; c < assignment.k; ++c)
        reps.emplace_back(medoids[static_cast<std::size_t>(c)], c);
    std::sort(reps.begin(), reps.end());
    for (const auto& [medoid, label] : reps) {
        d.representatives.push_back(medoid);
        d.weights.push_back(static_cast<double>(period_length) *
                            cluster_size[static_cast<std::size_t>(label)]);
    }

    if (d.method == AggregationMethod::chronological) {
        int begin = 0;
        for (int p = 1; p <= assignment.n_periods; ++p) {
            if (p == assignment.n_periods ||
                assignment.labels[static_cast<std::size_t>(p)] !=
                    assignment.labels[static_cast<std::size_t>(p - 1)]) {
                d.segments.emplace_back(begin, p);
                begin = p;
            }
        }
    } else {
        d.period_map.resize(assignment.labels.size());
        for (std::size_t p = 0; p < assignment.labels.size(); ++p)
            d.period_map[p] = medoids[static_cast<std::size_t>(
                assignment.labels[p])];
    }
    return d;
}

std::vector<std::vector<double>> rescale(const TimeSeriesMatrix& matrix,
                                         const std::vector<int>& representatives,
                                         int period_length) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(matrix.columns()));
    for (int c = 0; c < matrix.columns(); ++c) {
        auto& col = out[static_cast<std::size_t>(c)];
        col.reserve(representatives.size() * static_cast<std::size_t>(period_length));
        for (int rep : representatives)
            for (int j = 0; j < period_length; ++j)
                col.push_back(matrix.original[static_cast<std::size_t>(c)]
                                             [static_cast<std::size_t>(rep * period_length + j)]);
    }
    return out;
}

std::vector<double> expand(const AggregationDescriptor& desc,
                           const std::vector<double>& representative_series) {
    std::vector<double> out(static_cast<std::size_t>(desc.original_hours), 0.0);
    if (desc.method == AggregationMethod::coupling_days) {
        std::vector<int> pos(static_cast<std::size_t>(desc.original_hours / 24), -1);
        for (std::size_t p = 0; p < desc.representatives.size(); ++p)
            pos[static_cast<std::size_t>(desc.representatives[p])] = static_cast<int>(p);
        for (int t = 0; t < desc.original_hours; ++t) {
            int day = t / 24, hour = t % 24;
            int rp = pos[static_cast<std::size_t>(desc.period_map[static_cast<std::size_t>(day)])];
            out[static_cast<std::size_t>(t)] =
                representative_series[static_cast<std::size_t>(rp * 24 + hour)];
        }
    } else if (!desc.segments.empty()) {
        for (std::size_t s = 0; s < desc.segments.size(); ++s)
            for (int t = desc.segments[s].first; t < desc.segments[s].second; ++t)
                out[static_cast<std::size_t>(t)] = representative_series[s];
    } else {
        // identity / none: one representative per hour
        for (int t = 0; t < desc.original_hours; ++t)
            out[static_cast<std::size_t>(t)] = representative_series[static_cast<std::size_t>(t)];
    }
    return out;
}

std::pair<Network, AggregationDescriptor> aggregate(const Network& net,
                                                    AggregationMethod method, int k) {
    const int T = net.snapshots.count();
    for (double w : net.snapshots.weightings)
        if (w != 1.0) throw TsamError("aggregation requires an hourly (unit-weight) network");

    int period_length;
    Adjacency adjacency;
    if (method == AggregationMethod::chronological) {
        period_length = 1;
        adjacency = Adjacency::chain;
        if (k < 1 || k > T) throw TsamError("k exceeds number of hours");
    } else if (method == AggregationMethod::coupling_days) {
        period_length = 24;
        adjacency = Adjacency::none;
        if (T % 24 != 0) throw TsamError("coupling_days requires a horizon divisible by 24");
        if (k < 1 || k > T / 24) throw TsamError("k exceeds number of days");
    } else {
        throw TsamError("aggregate expects chronological or coupling_days");
    }

    auto matrix = normalize(net);
    auto assignment = ward_cluster(matrix, period_length, k, adjacency);
    auto medoids = select_medoids(assignment, matrix, period_length);
    auto desc = make_descriptor(assignment, medoids, period_length);

    // representative hour indices, in descriptor order
    std::vector<int> hours;
    for (std::size_t p = 0; p < desc.representatives.size(); ++p)
        for (int j = 0; j < period_length; ++j)
            hours.push_back(desc.representatives[p] * period_length + j);

    Network agg = net;
    agg.snapshots.weightings.clear();
    for (std::size_t p = 0; p < desc.representatives.size(); ++p)
        for (int j = 0; j < period_length; ++j)
            agg.snapshots.weightings.push_back(desc.weights[p] / period_length);

    auto sample = [&hours](const std::vector<double>& series) {
        std::vector<double> out;
        out.reserve(hours.size());
        for (int h : hours) out.push_back(series[static_cast<std::size_t>(h)]);
        return out;
    };
    for (auto& l : agg.loads) l.demand = sample(l.demand);
    for (auto& g : agg.generators)
        if (g.availability) g.availability = sample(*g.availability);

    return {std::move(agg), std::move(desc)};
}

}  // namespace lopf
