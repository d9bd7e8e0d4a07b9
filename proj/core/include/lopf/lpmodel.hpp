#pragma once

#include "lopf/lp.hpp"
#include "lopf/network.hpp"
#include "lopf/simplex.hpp"

#include <map>
#include <utility>
#include <vector>

namespace lopf {

enum class AggregationMethod { none, chronological, coupling_days };

std::string_view to_string(AggregationMethod m);
std::optional<AggregationMethod> aggregation_method_from_string(std::string_view s);

// How an LP snapshot set relates to the original horizon.
struct AggregationDescriptor {
    AggregationMethod method = AggregationMethod::none;
    int original_hours = 0;
    int period_length = 1;  // 1 (hours) or 24 (days)
    std::vector<int> representatives;  // period indices, ascending
    std::vector<double> weights;       // hours represented per representative
    std::vector<int> period_map;       // coupling: original day -> representative day
    std::vector<std::pair<int, int>> segments;  // chronological: [begin, end) hours

    int k() const { return static_cast<int>(representatives.size()); }
    double total_weight() const;

    static AggregationDescriptor identity(int hours);

    std::string to_json() const;
    static AggregationDescriptor from_json(const std::string& text);
};

// Emits the multi-period DC optimal power flow with storage expansion as an
// LpProblem: angle + flow variables, power balance with the injection
// substituted, cyclic state-of-charge linking, capacity expansion bounds.
// The reference bus (lexicographically smallest id) has its angle eliminated.
LpProblem build_lp(const Network& net, const AggregationDescriptor& desc);

struct StorageSolution {
    std::vector<double> dispatch;  // h+ - h-, per LP snapshot
    std::vector<double> discharge;
    std::vector<double> charge;
    std::vector<double> soc;       // per SOC snapshot (full horizon under coupling)
    double built_power = 0;        // H, MW
    double built_energy = 0;       // qH, MWh
};

struct DispatchResult {
    double objective = 0;
    std::vector<double> weights;  // LP snapshot weightings
    int soc_hours = 0;            // length of SOC series
    std::map<std::string, std::vector<double>> generator_dispatch;
    std::map<std::string, double> generator_capacity;
    std::map<std::string, StorageSolution> storage;
    std::map<std::string, std::vector<double>> line_flow;
    std::map<std::string, std::vector<double>> bus_angle;  // reference bus all zero
};

DispatchResult extract_solution(const Network& net, const AggregationDescriptor& desc,
                                const SolveResult& raw);

struct CostBreakdown {
    double generator_operating = 0;
    double storage_operating = 0;
    double generator_capital = 0;
    double storage_capital = 0;
    double total() const {
        return generator_operating + storage_operating + generator_capital + storage_capital;
    }
};

CostBreakdown objective_breakdown(const DispatchResult& result, const Network& net);

// Variable naming used by build_lp / extract_solution.
namespace lpvar {
std::string gen_dispatch(const std::string& id, int t);
std::string gen_capacity(const std::string& id);
std::string discharge(const std::string& id, int t);
std::string charge(const std::string& id, int t);
std::string storage_capacity(const std::string& id);
std::string soc(const std::string& id, int t);
std::string angle(const std::string& bus, int t);
std::string flow(const std::string& line, int t);
}  // namespace lpvar

}  // namespace lopf
