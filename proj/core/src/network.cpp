#include "lopf/network.hpp"

#include "lopf/csv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace lopf {

std::string_view to_string(Carrier c) {
    switch (c) {
        case Carrier::wind: return "wind";
        case Carrier::solar: return "solar";
        case Carrier::gas: return "gas";
        case Carrier::waste: return "waste";
        case Carrier::coal: return "coal";
        case Carrier::biomass: return "biomass";
    }
    return "?";
}

std::optional<Carrier> carrier_from_string(std::string_view s) {
    for (Carrier c : all_carriers)
        if (s == to_string(c)) return c;
    return std::nullopt;
}

bool is_renewable(Carrier c) { return c == Carrier::wind || c == Carrier::solar; }

double Snapshots::total_hours() const {
    double s = 0;
    for (double w : weightings) s += w;
    return s;
}

Snapshots Snapshots::hourly(int hours) {
    Snapshots s;
    s.weightings.assign(static_cast<std::size_t>(hours), 1.0);
    return s;
}

int Network::bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------- loading

namespace {

double num(const csv::Table& t, std::size_t row, int col) {
    return csv::parse_double(t.rows[row][static_cast<std::size_t>(col)], t.file, row);
}

const std::string& str(const csv::Table& t, std::size_t row, int col) {
    return t.rows[row][static_cast<std::size_t>(col)];
}

void check_bus(const Network& net, const std::string& bus, const std::string& file,
               const std::string& component) {
    if (net.bus_index(bus) < 0)
        throw NetworkError(file + ": component '" + component +
                           "' references unknown bus '" + bus + "'");
}

// Wide series table: column "t" plus one column per component id.
// Returns the series found, keyed by column name.
std::map<std::string, std::vector<double>> read_series(const std::filesystem::path& dir,
                                                       const std::string& name, int T) {
    auto t = csv::read_file(dir / name);
    int tcol = t.require_column("t");
    if (static_cast<int>(t.rows.size()) != T)
        throw NetworkError(name + ": series length " + std::to_string(t.rows.size()) +
                           " does not match snapshot count " + std::to_string(T));
    std::map<std::string, std::vector<double>> out;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (static_cast<int>(c) == tcol) continue;
        auto& series = out[t.header[c]];
        series.resize(static_cast<std::size_t>(T));
        for (int r = 0; r < T; ++r)
            series[static_cast<std::size_t>(r)] = num(t, static_cast<std::size_t>(r),
                                                      static_cast<int>(c));
    }
    return out;
}

}  // namespace

Network load_network(const std::filesystem::path& dir) {
    Network net;

    {
        auto t = csv::read_file(dir / "snapshots.csv");
        int wcol = t.require_column("weighting");
        t.require_column("t");
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            net.snapshots.weightings.push_back(num(t, r, wcol));
    }
    const int T = net.snapshots.count();

    {
        auto t = csv::read_file(dir / "buses.csv");
        int id = t.require_column("id"), x = t.require_column("x"),
            y = t.require_column("y"), v = t.require_column("v_nom");
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            net.buses.push_back({str(t, r, id), num(t, r, x), num(t, r, y), num(t, r, v)});
    }

    {
        auto t = csv::read_file(dir / "lines.csv");
        int id = t.require_column("id"), b0 = t.require_column("bus0"),
            b1 = t.require_column("bus1"), b = t.require_column("b"),
            f = t.require_column("f_max");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            Line ln{str(t, r, id), str(t, r, b0), str(t, r, b1), num(t, r, b), num(t, r, f)};
            check_bus(net, ln.bus0, t.file, ln.id);
            check_bus(net, ln.bus1, t.file, ln.id);
            net.lines.push_back(std::move(ln));
        }
    }

    {
        auto t = csv::read_file(dir / "generators.csv");
        int id = t.require_column("id"), bus = t.require_column("bus"),
            car = t.require_column("carrier"), gmin = t.require_column("g_min"),
            gmax = t.require_column("g_max"), fx = t.require_column("fixed"),
            oc = t.require_column("op_cost"), cc = t.require_column("cap_cost");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            Generator g;
            g.id = str(t, r, id);
            g.bus = str(t, r, bus);
            auto c = carrier_from_string(str(t, r, car));
            if (!c)
                throw NetworkError(t.file + " row " + std::to_string(r + 1) +
                                   ": unknown carrier '" + str(t, r, car) + "'");
            g.carrier = *c;
            g.cap_min = num(t, r, gmin);
            g.cap_max = num(t, r, gmax);
            g.fixed = num(t, r, fx) != 0;
            g.op_cost = num(t, r, oc);
            g.cap_cost = num(t, r, cc);
            check_bus(net, g.bus, t.file, g.id);
            net.generators.push_back(std::move(g));
        }
    }

    {
        auto series = read_series(dir, "generators_series.csv", T);
        for (auto& g : net.generators) {
            auto it = series.find(g.id);
            if (it != series.end()) g.availability = std::move(it->second);
        }
    }

    {
        auto t = csv::read_file(dir / "storage_units.csv");
        int id = t.require_column("id"), bus = t.require_column("bus"),
            hmin = t.require_column("h_min"), hmax = t.require_column("h_max"),
            q = t.require_column("q"), ec = t.require_column("eta_char"),
            ed = t.require_column("eta_dis"), el = t.require_column("eta_loss"),
            oc = t.require_column("op_cost"), cc = t.require_column("cap_cost");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            StorageUnit s;
            s.id = str(t, r, id);
            s.bus = str(t, r, bus);
            s.power_min = num(t, r, hmin);
            s.power_max = num(t, r, hmax);
            s.energy_to_power = num(t, r, q);
            s.eta_char = num(t, r, ec);
            s.eta_dis = num(t, r, ed);
            s.eta_loss = num(t, r, el);
            s.op_cost = num(t, r, oc);
            s.cap_cost = num(t, r, cc);
            check_bus(net, s.bus, t.file, s.id);
            net.storage_units.push_back(std::move(s));
        }
    }

    {
        auto t = csv::read_file(dir / "loads.csv");
        int id = t.require_column("id"), bus = t.require_column("bus");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            Load l;
            l.id = str(t, r, id);
            l.bus = str(t, r, bus);
            check_bus(net, l.bus, t.file, l.id);
            net.loads.push_back(std::move(l));
        }
        auto series = read_series(dir, "loads_series.csv", T);
        for (auto& l : net.loads) {
            auto it = series.find(l.id);
            if (it == series.end())
                throw NetworkError("loads_series.csv: missing series for load '" + l.id + "'");
            l.demand = std::move(it->second);
        }
    }

    auto diags = validate(net);
    if (!diags.empty())
        throw NetworkError("invalid network: " + diags.front().component + ": " +
                           diags.front().rule);
    return net;
}

// ---------------------------------------------------------------- saving

void save_network(const Network& input, const std::filesystem::path& dir) {
    Network net = input;  // sort copies, row order is by id then t
    std::filesystem::create_directories(dir);
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(net.buses.begin(), net.buses.end(), by_id);
    std::sort(net.lines.begin(), net.lines.end(), by_id);
    std::sort(net.generators.begin(), net.generators.end(), by_id);
    std::sort(net.storage_units.begin(), net.storage_units.end(), by_id);
    std::sort(net.loads.begin(), net.loads.end(), by_id);

    const int T = net.snapshots.count();
    auto fd = csv::format_double;

    {
        csv::Table t{"snapshots.csv", {"t", "weighting"}, {}};
        for (int i = 0; i < T; ++i)
            t.rows.push_back({std::to_string(i + 1),
                              fd(net.snapshots.weightings[static_cast<std::size_t>(i)])});
        csv::write_file(dir / "snapshots.csv", t);
    }
    {
        csv::Table t{"buses.csv", {"id", "x", "y", "v_nom"}, {}};
        for (const auto& b : net.buses)
            t.rows.push_back({b.id, fd(b.x), fd(b.y), fd(b.v_nom)});
        csv::write_file(dir / "buses.csv", t);
    }
    {
        csv::Table t{"lines.csv", {"id", "bus0", "bus1", "b", "f_max"}, {}};
        for (const auto& l : net.lines)
            t.rows.push_back({l.id, l.bus0, l.bus1, fd(l.susceptance), fd(l.rating)});
        csv::write_file(dir / "lines.csv", t);
    }
    {
        csv::Table t{"generators.csv",
                     {"id", "bus", "carrier", "g_min", "g_max", "fixed", "op_cost", "cap_cost"},
                     {}};
        for (const auto& g : net.generators)
            t.rows.push_back({g.id, g.bus, std::string(to_string(g.carrier)), fd(g.cap_min),
                              fd(g.cap_max), g.fixed ? "1" : "0", fd(g.op_cost),
                              fd(g.cap_cost)});
        csv::write_file(dir / "generators.csv", t);
    }
    {
        csv::Table t{"generators_series.csv", {"t"}, {}};
        std::vector<const Generator*> with_series;
        for (const auto& g : net.generators)
            if (g.availability) {
                t.header.push_back(g.id);
                with_series.push_back(&g);
            }
        for (int i = 0; i < T; ++i) {
            std::vector<std::string> row{std::to_string(i + 1)};
            for (const auto* g : with_series)
                row.push_back(fd((*g->availability)[static_cast<std::size_t>(i)]));
            t.rows.push_back(std::move(row));
        }
        csv::write_file(dir / "generators_series.csv", t);
    }
    {
        csv::Table t{"storage_units.csv",
                     {"id", "bus", "h_min", "h_max", "q", "eta_char", "eta_dis", "eta_loss",
                      "op_cost", "cap_cost"},
                     {}};
        for (const auto& s : net.storage_units)
            t.rows.push_back({s.id, s.bus, fd(s.power_min), fd(s.power_max),
                              fd(s.energy_to_power), fd(s.eta_char), fd(s.eta_dis),
                              fd(s.eta_loss), fd(s.op_cost), fd(s.cap_cost)});
        csv::write_file(dir / "storage_units.csv", t);
    }
    {
        csv::Table t{"loads.csv", {"id", "bus"}, {}};
        for (const auto& l : net.loads) t.rows.push_back({l.id, l.bus});
        csv::write_file(dir / "loads.csv", t);
    }
    {
        csv::Table t{"loads_series.csv", {"t"}, {}};
        for (const auto& l : net.loads) t.header.push_back(l.id);
        for (int i = 0; i < T; ++i) {
            std::vector<std::string> row{std::to_string(i + 1)};
            for (const auto& l : net.loads)
                row.push_back(fd(l.demand[static_cast<std::size_t>(i)]));
            t.rows.push_back(std::move(row));
        }
        csv::write_file(dir / "loads_series.csv", t);
    }
}

// ---------------------------------------------------------------- validation

std::vector<Diagnostic> validate(const Network& net) {
    std::vector<Diagnostic> d;
    auto add = [&d](const std::string& id, const std::string& rule) {
        d.push_back({id, rule});
    };
    const int T = net.snapshots.count();

    for (double w : net.snapshots.weightings)
        if (w < 1.0 || w != std::floor(w)) {
            add("snapshots", "weightings must be integers >= 1");
            break;
        }

    std::set<std::string> bus_ids;
    for (const auto& b : net.buses)
        if (!bus_ids.insert(b.id).second) add(b.id, "duplicate bus id");

    for (const auto& l : net.lines) {
        if (l.rating <= 0) add(l.id, "line rating must be positive");
        if (l.susceptance <= 0) add(l.id, "line susceptance must be positive");
        if (l.bus0 == l.bus1) add(l.id, "line endpoints must differ");
        if (!bus_ids.count(l.bus0) || !bus_ids.count(l.bus1))
            add(l.id, "line endpoint bus does not exist");
    }

    for (const auto& g : net.generators) {
        if (!bus_ids.count(g.bus)) add(g.id, "generator bus does not exist");
        if (g.cap_min > g.cap_max) add(g.id, "capacity bounds must satisfy g_min <= g_max");
        if (g.fixed && g.cap_min != g.cap_max)
            add(g.id, "fixed generator requires g_min == g_max");
        if (g.availability) {
            if (static_cast<int>(g.availability->size()) != T)
                add(g.id, "availability series length mismatch");
            for (double a : *g.availability)
                if (a < 0.0 || a > 1.0) {
                    add(g.id, "availability out of [0,1]");
                    break;
                }
        }
    }

    for (const auto& s : net.storage_units) {
        if (!bus_ids.count(s.bus)) add(s.id, "storage bus does not exist");
        if (s.energy_to_power <= 0) add(s.id, "q must be positive");
        if (s.power_min > s.power_max) add(s.id, "power bounds must satisfy h_min <= h_max");
        if (s.eta_char <= 0 || s.eta_char > 1) add(s.id, "eta_char out of (0,1]");
        if (s.eta_dis <= 0 || s.eta_dis > 1) add(s.id, "eta_dis out of (0,1]");
        if (s.eta_char * s.eta_dis > 1) add(s.id, "round-trip efficiency above 1");
        if (s.eta_loss < 0 || s.eta_loss >= 1) add(s.id, "eta_loss out of [0,1)");
        if (s.dispatch_min > 0 || s.dispatch_max < 0)
            add(s.id, "dispatch availability must bracket zero");
    }

    for (const auto& l : net.loads) {
        if (!bus_ids.count(l.bus)) add(l.id, "load bus does not exist");
        if (static_cast<int>(l.demand.size()) != T)
            add(l.id, "demand series length mismatch");
        for (double v : l.demand)
            if (v < 0) {
                add(l.id, "demand must be nonnegative");
                break;
            }
    }
    return d;
}

// ---------------------------------------------------------------- synthesis

Network synthesize_network(int n_buses, int hours, unsigned long seed) {
    if (n_buses < 2) throw NetworkError("synthesize_network: need at least 2 buses");
    if (hours < 2) throw NetworkError("synthesize_network: need at least 2 hours");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };

    Network net;
    net.snapshots = Snapshots::hourly(hours);

    const int width = n_buses < 100 ? 2 : 3;
    auto bus_name = [width](int i) {
        std::string n = std::to_string(i + 1);
        while (static_cast<int>(n.size()) < width) n.insert(n.begin(), '0');
        return "B" + n;
    };

    for (int i = 0; i < n_buses; ++i) {
        double ang = 2.0 * std::numbers::pi * i / n_buses;
        net.buses.push_back({bus_name(i), 100.0 * std::cos(ang), 100.0 * std::sin(ang), 380.0});
    }
    for (int i = 0; i < n_buses; ++i) {
        int j = (i + 1) % n_buses;
        if (n_buses == 2 && i == 1) break;  // no duplicate edge on a 2-bus ring
        net.lines.push_back({"line_" + bus_name(i) + "_" + bus_name(j), bus_name(i),
                             bus_name(j), 1.0, 400.0});
    }

    for (int i = 0; i < n_buses; ++i) {
        const std::string bus = bus_name(i);
        const double base = 80.0 + 40.0 * uni(rng);

        Load load{"load_" + bus, bus, {}};
        load.demand.reserve(static_cast<std::size_t>(hours));
        for (int t = 0; t < hours; ++t) {
            double daily = 0.75 + 0.25 * std::sin(2.0 * std::numbers::pi * ((t % 24) - 8) / 24.0);
            double v = base * daily * (1.0 + 0.05 * gauss(rng));
            load.demand.push_back(std::max(0.0, v));
        }
        net.loads.push_back(std::move(load));

        Generator wind;
        wind.id = "wind_" + bus;
        wind.bus = bus;
        wind.carrier = Carrier::wind;
        wind.cap_min = wind.cap_max = 3.0 * base;
        wind.fixed = true;
        wind.op_cost = 1.1;
        wind.cap_cost = 0;
        std::vector<double> wa(static_cast<std::size_t>(hours));
        double a = uni(rng);
        for (int t = 0; t < hours; ++t) {
            a = 0.5 + 0.92 * (a - 0.5) + 0.12 * gauss(rng);
            a = std::clamp(a, 0.05, 1.0);
            wa[static_cast<std::size_t>(t)] = a;
        }
        wind.availability = std::move(wa);
        net.generators.push_back(std::move(wind));

        Generator solar;
        solar.id = "solar_" + bus;
        solar.bus = bus;
        solar.carrier = Carrier::solar;
        solar.cap_min = solar.cap_max = 1.5 * base;
        solar.fixed = true;
        solar.op_cost = 0.9;
        solar.cap_cost = 0;
        std::vector<double> sa(static_cast<std::size_t>(hours));
        double day_factor = 0.3 + 0.7 * uni(rng);
        for (int t = 0; t < hours; ++t) {
            if (t > 0 && t % 24 == 0) day_factor = 0.3 + 0.7 * uni(rng);
            int h = t % 24;
            double bell = h >= 6 && h <= 18
                              ? std::pow(std::sin(std::numbers::pi * (h - 6) / 12.0), 2)
                              : 0.0;
            sa[static_cast<std::size_t>(t)] = clamp01(bell * day_factor);
        }
        solar.availability = std::move(sa);
        net.generators.push_back(std::move(solar));

        StorageUnit battery;
        battery.id = "battery_" + bus;
        battery.bus = bus;
        battery.power_min = 0;
        battery.power_max = 1e6;
        battery.energy_to_power = 6;
        battery.eta_char = battery.eta_dis = 0.9327;
        battery.eta_loss = 0.00694;
        battery.op_cost = 0.01;
        battery.cap_cost = 65822;
        net.storage_units.push_back(std::move(battery));

        StorageUnit hydrogen;
        hydrogen.id = "hydrogen_" + bus;
        hydrogen.bus = bus;
        hydrogen.power_min = 0;
        hydrogen.power_max = 1e6;
        hydrogen.energy_to_power = 168;
        hydrogen.eta_char = 0.725;
        hydrogen.eta_dis = 0.425;
        hydrogen.eta_loss = 0.000694;
        hydrogen.op_cost = 0.01;
        hydrogen.cap_cost = 65402;
        net.storage_units.push_back(std::move(hydrogen));
    }

    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(net.generators.begin(), net.generators.end(), by_id);
    std::sort(net.storage_units.begin(), net.storage_units.end(), by_id);
    std::sort(net.loads.begin(), net.loads.end(), by_id);
    return net;
}

}  // namespace lopf
