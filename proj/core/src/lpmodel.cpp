#include "lopf/lpmodel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace lopf {

std::string_view to_string(AggregationMethod m) {
    switch (m) {
        case AggregationMethod::none: return "none";
        case AggregationMethod::chronological: return "chronological";
        case AggregationMethod::coupling_days: return "coupling_days";
    }
    return "?";
}

std::optional<AggregationMethod> aggregation_method_from_string(std::string_view s) {
    if (s == "none") return AggregationMethod::none;
    if (s == "chronological") return AggregationMethod::chronological;
    if (s == "coupling_days") return AggregationMethod::coupling_days;
    return std::nullopt;
}

double AggregationDescriptor::total_weight() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

AggregationDescriptor AggregationDescriptor::identity(int hours) {
    AggregationDescriptor d;
    d.method = AggregationMethod::none;
    d.original_hours = hours;
    d.period_length = 1;
    d.representatives.resize(static_cast<std::size_t>(hours));
    for (int t = 0; t < hours; ++t) d.representatives[static_cast<std::size_t>(t)] = t;
    d.weights.assign(static_cast<std::size_t>(hours), 1.0);
    return d;
}

std::string AggregationDescriptor::to_json() const {
    nlohmann::ordered_json j;
    j["method"] = std::string(to_string(method));
    j["k"] = k();
    j["representatives"] = representatives;
    j["weights"] = weights;
    j["period_map"] = period_map;
    nlohmann::ordered_json segs = nlohmann::ordered_json::array();
    for (const auto& [b, e] : segments) segs.push_back({b, e});
    j["segments"] = segs;
    j["original_hours"] = original_hours;
    j["period_length"] = period_length;
    return j.dump(2) + "\n";
}

AggregationDescriptor AggregationDescriptor::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    AggregationDescriptor d;
    auto m = aggregation_method_from_string(j.at("method").get<std::string>());
    if (!m) throw LpError("descriptor: unknown method");
    d.method = *m;
    d.representatives = j.at("representatives").get<std::vector<int>>();
    d.weights = j.at("weights").get<std::vector<double>>();
    d.period_map = j.at("period_map").get<std::vector<int>>();
    for (const auto& seg : j.at("segments"))
        d.segments.emplace_back(seg.at(0).get<int>(), seg.at(1).get<int>());
    d.original_hours = j.at("original_hours").get<int>();
    d.period_length = j.at("period_length").get<int>();
    return d;
}

namespace lpvar {
std::string gen_dispatch(const std::string& id, int t) {
    return "g(" + id + "," + std::to_string(t) + ")";
}
std::string gen_capacity(const std::string& id) { return "G(" + id + ")"; }
std::string discharge(const std::string& id, int t) {
    return "hp(" + id + "," + std::to_string(t) + ")";
}
std::string charge(const std::string& id, int t) {
    return "hm(" + id + "," + std::to_string(t) + ")";
}
std::string storage_capacity(const std::string& id) { return "H(" + id + ")"; }
std::string soc(const std::string& id, int t) {
    return "e(" + id + "," + std::to_string(t) + ")";
}
std::string angle(const std::string& bus, int t) {
    return "th(" + bus + "," + std::to_string(t) + ")";
}
std::string flow(const std::string& line, int t) {
    return "f(" + line + "," + std::to_string(t) + ")";
}
}  // namespace lpvar

namespace {

int reference_bus(const Network& net) {
    int ref = 0;
    for (std::size_t i = 1; i < net.buses.size(); ++i)
        if (net.buses[i].id < net.buses[static_cast<std::size_t>(ref)].id)
            ref = static_cast<int>(i);
    return ref;
}

void check_descriptor(const Network& net, const AggregationDescriptor& desc) {
    const int T = net.snapshots.count();
    switch (desc.method) {
        case AggregationMethod::none:
            if (desc.original_hours != T)
                throw LpError("descriptor horizon does not match network snapshots");
            break;
        case AggregationMethod::chronological:
            if (desc.k() != T)
                throw LpError("chronological descriptor expects one snapshot per segment");
            break;
        case AggregationMethod::coupling_days: {
            if (desc.original_hours % 24 != 0)
                throw LpError("coupling_days requires a horizon divisible by 24");
            if (T != 24 * desc.k())
                throw LpError("coupling descriptor expects 24 snapshots per representative day");
            int days = desc.original_hours / 24;
            if (static_cast<int>(desc.period_map.size()) != days)
                throw LpError("coupling descriptor period_map must cover every original day");
            break;
        }
    }
}

}  // namespace

LpProblem build_lp(const Network& net, const AggregationDescriptor& desc) {
    check_descriptor(net, desc);

    const int T = net.snapshots.count();  // LP snapshots
    const bool coupling = desc.method == AggregationMethod::coupling_days;
    const int soc_T = coupling ? desc.original_hours : T;
    const auto& w = net.snapshots.weightings;
    const int ref = reference_bus(net);

    // representative day -> position among representatives, for coupling
    std::vector<int> rep_pos;
    if (coupling) {
        int days = desc.original_hours / 24;
        rep_pos.assign(static_cast<std::size_t>(days), -1);
        for (std::size_t p = 0; p < desc.representatives.size(); ++p)
            rep_pos[static_cast<std::size_t>(desc.representatives[p])] = static_cast<int>(p);
    }

    LpProblem lp;

    // variables: g, G, h+, h-, H, e, theta (non-reference), f
    std::vector<std::vector<int>> vg(net.generators.size());
    std::vector<int> vG(net.generators.size());
    std::vector<std::vector<int>> vhp(net.storage_units.size()), vhm(net.storage_units.size());
    std::vector<int> vH(net.storage_units.size());
    std::vector<std::vector<int>> ve(net.storage_units.size());
    std::vector<std::vector<int>> vth(net.buses.size());
    std::vector<std::vector<int>> vf(net.lines.size());

    for (std::size_t s = 0; s < net.generators.size(); ++s) {
        const auto& g = net.generators[s];
        vg[s].resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) {
            double up = g.fixed ? g.availability_at(t) * g.cap_max : kInf;
            vg[s][static_cast<std::size_t>(t)] = lp.add_variable(
                lpvar::gen_dispatch(g.id, t), 0.0, up,
                w[static_cast<std::size_t>(t)] * g.op_cost);
        }
    }
    for (std::size_t s = 0; s < net.generators.size(); ++s) {
        const auto& g = net.generators[s];
        vG[s] = lp.add_variable(lpvar::gen_capacity(g.id), g.cap_min, g.cap_max, g.cap_cost);
    }
    for (std::size_t r = 0; r < net.storage_units.size(); ++r) {
        const auto& st = net.storage_units[r];
        vhp[r].resize(static_cast<std::size_t>(T));
        vhm[r].resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t)
            vhp[r][static_cast<std::size_t>(t)] = lp.add_variable(
                lpvar::discharge(st.id, t), 0.0, kInf,
                w[static_cast<std::size_t>(t)] * st.op_cost);
        for (int t = 0; t < T; ++t)
            vhm[r][static_cast<std::size_t>(t)] =
                lp.add_variable(lpvar::charge(st.id, t), 0.0, kInf, 0.0);
    }
    for (std::size_t r = 0; r < net.storage_units.size(); ++r) {
        const auto& st = net.storage_units[r];
        vH[r] = lp.add_variable(lpvar::storage_capacity(st.id), st.power_min, st.power_max,
                                st.cap_cost);
    }
    for (std::size_t r = 0; r < net.storage_units.size(); ++r) {
        const auto& st = net.storage_units[r];
        ve[r].resize(static_cast<std::size_t>(soc_T));
        for (int t = 0; t < soc_T; ++t)
            ve[r][static_cast<std::size_t>(t)] =
                lp.add_variable(lpvar::soc(st.id, t), 0.0, kInf, 0.0);
    }
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        if (static_cast<int>(i) == ref) continue;  // reference angle eliminated
        vth[i].resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t)
            vth[i][static_cast<std::size_t>(t)] =
                lp.add_variable(lpvar::angle(net.buses[i].id, t), -kInf, kInf, 0.0);
    }
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const auto& ln = net.lines[l];
        vf[l].resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t)
            vf[l][static_cast<std::size_t>(t)] = lp.add_variable(
                lpvar::flow(ln.id, t), -ln.rating, ln.rating, 0.0);
    }

    // per-bus attachments
    std::vector<std::vector<int>> bus_gens(net.buses.size()), bus_storage(net.buses.size());
    std::vector<std::vector<std::pair<int, int>>> bus_lines(net.buses.size());  // (line, +-1)
    std::vector<std::vector<int>> bus_loads(net.buses.size());
    for (std::size_t s = 0; s < net.generators.size(); ++s)
        bus_gens[static_cast<std::size_t>(net.bus_index(net.generators[s].bus))].push_back(
            static_cast<int>(s));
    for (std::size_t r = 0; r < net.storage_units.size(); ++r)
        bus_storage[static_cast<std::size_t>(net.bus_index(net.storage_units[r].bus))]
            .push_back(static_cast<int>(r));
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        bus_lines[static_cast<std::size_t>(net.bus_index(net.lines[l].bus0))].emplace_back(
            static_cast<int>(l), +1);
        bus_lines[static_cast<std::size_t>(net.bus_index(net.lines[l].bus1))].emplace_back(
            static_cast<int>(l), -1);
    }
    for (std::size_t d = 0; d < net.loads.size(); ++d)
        bus_loads[static_cast<std::size_t>(net.bus_index(net.loads[d].bus))].push_back(
            static_cast<int>(d));

    // power balance with the injection substituted:
    //   sum g + sum (h+ - h-) - sum_l K_il f_l = load(i,t)
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        for (int t = 0; t < T; ++t) {
            std::vector<std::pair<int, double>> row;
            for (int s : bus_gens[i]) row.emplace_back(vg[static_cast<std::size_t>(s)]
                                                          [static_cast<std::size_t>(t)], 1.0);
            for (int r : bus_storage[i]) {
                row.emplace_back(vhp[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)],
                                 1.0);
                row.emplace_back(vhm[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)],
                                 -1.0);
            }
            for (const auto& [l, sign] : bus_lines[i])
                row.emplace_back(vf[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)],
                                 -static_cast<double>(sign));
            double demand = 0;
            for (int d : bus_loads[i])
                demand += net.loads[static_cast<std::size_t>(d)]
                              .demand[static_cast<std::size_t>(t)];
            lp.add_constraint("bal(" + net.buses[i].id + "," + std::to_string(t) + ")",
                              std::move(row), Relation::eq, demand);
        }
    }

    // flow definition: f = b (theta_from - theta_to), reference angle = 0
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const auto& ln = net.lines[l];
        int i0 = net.bus_index(ln.bus0), i1 = net.bus_index(ln.bus1);
        for (int t = 0; t < T; ++t) {
            std::vector<std::pair<int, double>> row;
            row.emplace_back(vf[l][static_cast<std::size_t>(t)], 1.0);
            if (i0 != ref)
                row.emplace_back(
                    vth[static_cast<std::size_t>(i0)][static_cast<std::size_t>(t)],
                    -ln.susceptance);
            if (i1 != ref)
                row.emplace_back(
                    vth[static_cast<std::size_t>(i1)][static_cast<std::size_t>(t)],
                    ln.susceptance);
            lp.add_constraint("flow(" + ln.id + "," + std::to_string(t) + ")", std::move(row),
                              Relation::eq, 0.0);
        }
    }

    // dispatch limits against expandable generator capacity
    for (std::size_t s = 0; s < net.generators.size(); ++s) {
        const auto& g = net.generators[s];
        if (g.fixed) continue;  // availability folded into the dispatch bounds
        for (int t = 0; t < T; ++t) {
            lp.add_constraint(
                "gcap(" + g.id + "," + std::to_string(t) + ")",
                {{vg[s][static_cast<std::size_t>(t)], 1.0}, {vG[s], -g.availability_at(t)}},
                Relation::le, 0.0);
        }
    }

    // storage dispatch and energy limits against built capacity
    for (std::size_t r = 0; r < net.storage_units.size(); ++r) {
        const auto& st = net.storage_units[r];
        for (int t = 0; t < T; ++t) {
            lp.add_constraint("dis(" + st.id + "," + std::to_string(t) + ")",
                              {{vhp[r][static_cast<std::size_t>(t)], 1.0},
                               {vH[r], -st.dispatch_max}},
                              Relation::le, 0.0);
            lp.add_constraint("chg(" + st.id + "," + std::to_string(t) + ")",
                              {{vhm[r][static_cast<std::size_t>(t)], 1.0},
                               {vH[r], st.dispatch_min}},
                              Relation::le, 0.0);
        }
        for (int t = 0; t < soc_T; ++t)
            lp.add_constraint("ecap(" + st.id + "," + std::to_string(t) + ")",
                              {{ve[r][static_cast<std::size_t>(t)], 1.0},
                               {vH[r], -st.energy_to_power}},
                              Relation::le, 0.0);
    }

    // cyclic state-of-charge linking
    for (std::size_t r = 0; r < net.storage_units.size(); ++r) {
        const auto& st = net.storage_units[r];
        for (int t = 0; t < soc_T; ++t) {
            int prev = (t + soc_T - 1) % soc_T;
            double omega;
            int snap;  // dispatch snapshot feeding this hour
            if (coupling) {
                omega = 1.0;
                int day = t / 24, hour = t % 24;
                int pos = rep_pos[static_cast<std::size_t>(
                    desc.period_map[static_cast<std::size_t>(day)])];
                if (pos < 0) throw LpError("period_map points to a non-representative day");
                snap = pos * 24 + hour;
            } else {
                omega = w[static_cast<std::size_t>(t)];
                snap = t;
            }
            double loss = std::pow(1.0 - st.eta_loss, omega);
            std::vector<std::pair<int, double>> row;
            row.emplace_back(ve[r][static_cast<std::size_t>(t)], 1.0);
            row.emplace_back(ve[r][static_cast<std::size_t>(prev)], -loss);
            row.emplace_back(vhp[r][static_cast<std::size_t>(snap)], omega / st.eta_dis);
            row.emplace_back(vhm[r][static_cast<std::size_t>(snap)], -omega * st.eta_char);
            lp.add_constraint("soc(" + st.id + "," + std::to_string(t) + ")", std::move(row),
                              Relation::eq, 0.0);
        }
    }

    return lp;
}

DispatchResult extract_solution(const Network& net, const AggregationDescriptor& desc,
                                const SolveResult& raw) {
    check_descriptor(net, desc);
    const int T = net.snapshots.count();
    const bool coupling = desc.method == AggregationMethod::coupling_days;
    const int soc_T = coupling ? desc.original_hours : T;
    const int ref = reference_bus(net);

    auto value = [&raw](const std::string& name) {
        auto it = raw.values.find(name);
        if (it == raw.values.end()) throw LpError("solution missing variable '" + name + "'");
        return it->second;
    };

    DispatchResult out;
    out.weights = net.snapshots.weightings;
    out.soc_hours = soc_T;

    for (const auto& g : net.generators) {
        auto& series = out.generator_dispatch[g.id];
        series.resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t)
            series[static_cast<std::size_t>(t)] = value(lpvar::gen_dispatch(g.id, t));
        out.generator_capacity[g.id] = value(lpvar::gen_capacity(g.id));
    }
    for (const auto& st : net.storage_units) {
        StorageSolution s;
        s.discharge.resize(static_cast<std::size_t>(T));
        s.charge.resize(static_cast<std::size_t>(T));
        s.dispatch.resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) {
            double hp = value(lpvar::discharge(st.id, t));
            double hm = value(lpvar::charge(st.id, t));
            s.discharge[static_cast<std::size_t>(t)] = hp;
            s.charge[static_cast<std::size_t>(t)] = hm;
            s.dispatch[static_cast<std::size_t>(t)] = hp - hm;
        }
        s.soc.resize(static_cast<std::size_t>(soc_T));
        for (int t = 0; t < soc_T; ++t)
            s.soc[static_cast<std::size_t>(t)] = value(lpvar::soc(st.id, t));
        s.built_power = value(lpvar::storage_capacity(st.id));
        s.built_energy = st.energy_to_power * s.built_power;
        out.storage[st.id] = std::move(s);
    }
    for (const auto& ln : net.lines) {
        auto& series = out.line_flow[ln.id];
        series.resize(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t)
            series[static_cast<std::size_t>(t)] = value(lpvar::flow(ln.id, t));
    }
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        auto& series = out.bus_angle[net.buses[i].id];
        series.assign(static_cast<std::size_t>(T), 0.0);
        if (static_cast<int>(i) == ref) continue;
        for (int t = 0; t < T; ++t)
            series[static_cast<std::size_t>(t)] = value(lpvar::angle(net.buses[i].id, t));
    }

    out.objective = raw.objective;
    double recomputed = objective_breakdown(out, net).total();
    double scale = std::max({1.0, std::abs(raw.objective), std::abs(recomputed)});
    if (std::abs(recomputed - raw.objective) > 1e-6 * scale)
        throw LpError("objective recomputed from primal values deviates from solver objective");
    return out;
}

CostBreakdown objective_breakdown(const DispatchResult& result, const Network& net) {
    CostBreakdown b;
    const int T = static_cast<int>(result.weights.size());
    for (const auto& g : net.generators) {
        const auto& series = result.generator_dispatch.at(g.id);
        for (int t = 0; t < T; ++t)
            b.generator_operating += result.weights[static_cast<std::size_t>(t)] * g.op_cost *
                                     series[static_cast<std::size_t>(t)];
        b.generator_capital += g.cap_cost * result.generator_capacity.at(g.id);
    }
    for (const auto& st : net.storage_units) {
        const auto& s = result.storage.at(st.id);
        for (int t = 0; t < T; ++t)
            b.storage_operating += result.weights[static_cast<std::size_t>(t)] * st.op_cost *
                                   s.discharge[static_cast<std::size_t>(t)];
        b.storage_capital += st.cap_cost * s.built_power;
    }
    return b;
}

}  // namespace lopf
