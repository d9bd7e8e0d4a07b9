#pragma once

#include "lopf/lpmodel.hpp"
#include "lopf/network.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lopf {

// Accuracy of objective estimation, percent. base is the aggregated-model
// objective, value the reference; negative means costs were underestimated.
double aoe_percent(double z_reference, double z_aggregated);

// Average time reduction, percent. Negative when the aggregated model is
// slower than the reference.
double atr_percent(double t_reference, double t_aggregated);

// Pearson correlation coefficient; empty when either series is constant.
std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b);

// Mean component-wise correlation between the original input series and the
// full-horizon reconstruction implied by the descriptor, per feature kind
// ("load", "wind", "solar"). Constant components drop out of the mean.
std::map<std::string, std::optional<double>> pearson_carriers(
    const Network& reference, const Network& aggregated, const AggregationDescriptor& desc);

// Share of available renewable energy not dispatched, percent, for carriers
// with availability series. Available energy uses the built capacity G.
std::map<Carrier, std::optional<double>> curtailment(const Network& net,
                                                     const DispatchResult& result);

// Dispatched energy per carrier as a percentage of the total; sums to 100.
std::map<Carrier, double> carrier_shares(const Network& net, const DispatchResult& result);

struct IndicatorReport {
    std::string method;
    int k = 0;
    std::string status = "ok";
    std::optional<double> aoe;
    std::optional<double> atr;
    std::map<std::string, std::optional<double>> pearson_r;  // load/wind/solar
    std::map<Carrier, std::optional<double>> curtailment_pct;
    std::map<Carrier, double> shares_pct;
    double t_ref_s = 0;
    double t_agg_s = 0;
    double t_prep_s = 0;
    double z_ref = 0;
    double z_agg = 0;

    static std::string csv_header();
    std::string csv_row() const;
    std::string to_json() const;
};

}  // namespace lopf
