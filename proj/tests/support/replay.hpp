#pragma once

// Independent replay of the model equations against a solved dispatch.
// Deliberately written from the Network data alone, without reusing the LP
// emission code, so it can act as an oracle for it.

#include "lopf/lpmodel.hpp"
#include "lopf/network.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace replay {

struct Violation {
    std::string what;
    double residual;
};

inline void check(std::vector<Violation>& out, const std::string& what, double residual,
                  double tol) {
    if (std::abs(residual) > tol) out.push_back({what, residual});
}

// Residuals of power balance, flow definition and limits, generator and
// storage bounds, and the cyclic state-of-charge recursion.
inline std::vector<Violation> residuals(const lopf::Network& net,
                                        const lopf::AggregationDescriptor& desc,
                                        const lopf::DispatchResult& res,
                                        double tol = 1e-6) {
    using namespace lopf;
    std::vector<Violation> v;
    const int T = static_cast<int>(res.weights.size());

    for (int t = 0; t < T; ++t) {
        for (const auto& bus : net.buses) {
            double injection = 0;
            for (const auto& g : net.generators)
                if (g.bus == bus.id)
                    injection += res.generator_dispatch.at(g.id)[static_cast<std::size_t>(t)];
            for (const auto& s : net.storage_units)
                if (s.bus == bus.id)
                    injection += res.storage.at(s.id).dispatch[static_cast<std::size_t>(t)];
            for (const auto& l : net.loads)
                if (l.bus == bus.id) injection -= l.demand[static_cast<std::size_t>(t)];
            double flow_out = 0;
            for (const auto& ln : net.lines) {
                double f = res.line_flow.at(ln.id)[static_cast<std::size_t>(t)];
                if (ln.bus0 == bus.id) flow_out += f;
                if (ln.bus1 == bus.id) flow_out -= f;
            }
            check(v, "balance " + bus.id + " t" + std::to_string(t), injection - flow_out,
                  tol);
        }
        for (const auto& ln : net.lines) {
            double f = res.line_flow.at(ln.id)[static_cast<std::size_t>(t)];
            double th0 = res.bus_angle.at(ln.bus0)[static_cast<std::size_t>(t)];
            double th1 = res.bus_angle.at(ln.bus1)[static_cast<std::size_t>(t)];
            check(v, "kirchhoff " + ln.id + " t" + std::to_string(t),
                  f - ln.susceptance * (th0 - th1), tol);
            if (std::abs(f) > ln.rating + tol)
                v.push_back({"rating " + ln.id + " t" + std::to_string(t),
                             std::abs(f) - ln.rating});
        }
        for (const auto& g : net.generators) {
            double gd = res.generator_dispatch.at(g.id)[static_cast<std::size_t>(t)];
            double cap = res.generator_capacity.at(g.id);
            if (gd < -tol) v.push_back({"dispatch<0 " + g.id, gd});
            double ub = g.availability_at(t) * cap;
            if (gd > ub + tol) v.push_back({"dispatch>avail " + g.id, gd - ub});
            if (cap < g.cap_min - tol || cap > g.cap_max + tol)
                v.push_back({"capacity bounds " + g.id, cap});
        }
    }

    for (const auto& s : net.storage_units) {
        const auto& sol = res.storage.at(s.id);
        const int ST = res.soc_hours;
        if (sol.built_power < s.power_min - tol || sol.built_power > s.power_max + tol)
            v.push_back({"power bounds " + s.id, sol.built_power});
        check(v, "energy capacity " + s.id,
              std::max(0.0, sol.built_energy - s.energy_to_power * sol.built_power), tol);
        for (int t = 0; t < T; ++t) {
            if (sol.discharge[static_cast<std::size_t>(t)] >
                s.dispatch_max * sol.built_power + tol)
                v.push_back({"discharge limit " + s.id + " t" + std::to_string(t),
                             sol.discharge[static_cast<std::size_t>(t)]});
            if (sol.charge[static_cast<std::size_t>(t)] >
                -s.dispatch_min * sol.built_power + tol)
                v.push_back({"charge limit " + s.id + " t" + std::to_string(t),
                             sol.charge[static_cast<std::size_t>(t)]});
        }
        // SOC recursion with standing-loss exponent and cyclic wrap. Under
        // day-coupling the SOC runs over the full horizon while dispatch is
        // indexed through the day map.
        for (int t = 0; t < ST; ++t) {
            int prev = (t + ST - 1) % ST;
            int snap;
            double omega;
            if (desc.method == lopf::AggregationMethod::coupling_days) {
                int rep_day = desc.period_map[static_cast<std::size_t>(t / 24)];
                int pos = -1;
                for (std::size_t p = 0; p < desc.representatives.size(); ++p)
                    if (desc.representatives[p] == rep_day) pos = static_cast<int>(p);
                snap = pos * 24 + t % 24;
                omega = 1.0;
            } else {
                snap = t;
                omega = res.weights[static_cast<std::size_t>(t)];
            }
            double e = sol.soc[static_cast<std::size_t>(t)];
            double ep = sol.soc[static_cast<std::size_t>(prev)];
            double hp = sol.discharge[static_cast<std::size_t>(snap)];
            double hm = sol.charge[static_cast<std::size_t>(snap)];
            double rhs = std::pow(1.0 - s.eta_loss, omega) * ep +
                         omega * (s.eta_char * hm - hp / s.eta_dis);
            check(v, "soc " + s.id + " t" + std::to_string(t), e - rhs, tol);
            if (e < -tol) v.push_back({"soc<0 " + s.id + " t" + std::to_string(t), e});
            if (e > sol.built_energy + tol)
                v.push_back({"soc>cap " + s.id + " t" + std::to_string(t),
                             e - sol.built_energy});
        }
    }
    return v;
}

}  // namespace replay
