#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lopf {

enum class Carrier { wind, solar, gas, waste, coal, biomass };

std::string_view to_string(Carrier c);
std::optional<Carrier> carrier_from_string(std::string_view s);
bool is_renewable(Carrier c);
inline constexpr Carrier all_carriers[] = {Carrier::wind,  Carrier::solar,
                                           Carrier::gas,   Carrier::waste,
                                           Carrier::coal,  Carrier::biomass};

// Snapshot set with per-snapshot weightings (hours represented).
struct Snapshots {
    std::vector<double> weightings;
    int count() const { return static_cast<int>(weightings.size()); }
    double total_hours() const;
    static Snapshots hourly(int hours);
};

struct Bus {
    std::string id;
    double x = 0, y = 0;
    double v_nom = 0;
};

struct Line {
    std::string id;
    std::string bus0, bus1;
    double susceptance = 1.0;  // per unit
    double rating = 0.0;       // MW
};

struct Generator {
    std::string id;
    std::string bus;
    Carrier carrier = Carrier::gas;
    double cap_min = 0, cap_max = 0;  // installable potential, MW
    bool fixed = true;                // fixed capacity: cap_min == cap_max
    double op_cost = 0;               // EUR/MWh
    double cap_cost = 0;              // EUR/MW
    // Upper availability per snapshot; absent means constant 1.
    std::optional<std::vector<double>> availability;

    double availability_at(int t) const {
        return availability ? (*availability)[static_cast<std::size_t>(t)] : 1.0;
    }
    // Lower availability is constant zero in this data model.
    double min_availability_at(int) const { return 0.0; }
};

struct StorageUnit {
    std::string id;
    std::string bus;
    double power_min = 0, power_max = 0;  // installable potential, MW
    double energy_to_power = 1;           // q, hours
    double eta_char = 1, eta_dis = 1;     // (0,1]
    double eta_loss = 0;                  // standing loss per hour, [0,1)
    double op_cost = 0;                   // EUR/MWh, charged on discharge
    double cap_cost = 0;                  // EUR/MW
    double dispatch_min = -1, dispatch_max = 1;  // per unit of power capacity
};

struct Load {
    std::string id;
    std::string bus;
    std::vector<double> demand;  // MW per snapshot
};

struct Diagnostic {
    std::string component;
    std::string rule;
};

struct Network {
    Snapshots snapshots;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Generator> generators;
    std::vector<StorageUnit> storage_units;
    std::vector<Load> loads;

    int bus_index(const std::string& id) const;  // -1 if absent
};

struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV directory schema: snapshots.csv, buses.csv, lines.csv, generators.csv,
// generators_series.csv, storage_units.csv, loads.csv, loads_series.csv.
Network load_network(const std::filesystem::path& dir);
void save_network(const Network& net, const std::filesystem::path& dir);

std::vector<Diagnostic> validate(const Network& net);

// Deterministic synthetic ring network: per bus one load, one wind and one
// solar generator (fixed capacity) and two extendable storage units
// (battery q=6, hydrogen-like q=168).
Network synthesize_network(int n_buses, int hours, unsigned long seed);

}  // namespace lopf
