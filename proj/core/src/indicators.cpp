#include "lopf/indicators.hpp"

#include "lopf/csv.hpp"
#include "lopf/tsam.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace lopf {

double aoe_percent(double z_reference, double z_aggregated) {
    if (z_aggregated == 0.0)
        throw std::invalid_argument("aoe undefined for zero aggregated objective");
    return (z_aggregated - z_reference) / z_aggregated * 100.0;
}

double atr_percent(double t_reference, double t_aggregated) {
    if (t_reference <= 0.0)
        throw std::invalid_argument("atr requires a positive reference time");
    return (t_reference - t_aggregated) / t_reference * 100.0;
}

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pearson requires equal-length series");
    const auto n = static_cast<double>(a.size());
    if (a.empty()) return std::nullopt;
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) return std::nullopt;
    return cov / std::sqrt(va * vb);
}

std::map<std::string, std::optional<double>> pearson_carriers(
    const Network& reference, const Network& aggregated, const AggregationDescriptor& desc) {
    auto ref_matrix = normalize(reference);
    auto agg_matrix = normalize(aggregated);
    if (ref_matrix.columns() != agg_matrix.columns())
        throw std::invalid_argument("networks have different feature columns");

    std::map<std::string, double> sum;
    std::map<std::string, int> count;
    for (int c = 0; c < ref_matrix.columns(); ++c) {
        auto sc = static_cast<std::size_t>(c);
        auto reconstructed = expand(desc, agg_matrix.original[sc]);
        auto r = pearson(ref_matrix.original[sc], reconstructed);
        std::string key = ref_matrix.kind[sc] == FeatureKind::load   ? "load"
                          : ref_matrix.kind[sc] == FeatureKind::wind ? "wind"
                                                                     : "solar";
        if (r) {
            sum[key] += *r;
            ++count[key];
        } else {
            sum.try_emplace(key, 0.0);
            count.try_emplace(key, 0);
        }
    }
    std::map<std::string, std::optional<double>> out;
    for (const auto& [key, s] : sum)
        out[key] = count[key] > 0 ? std::optional<double>(s / count[key]) : std::nullopt;
    return out;
}

std::map<Carrier, std::optional<double>> curtailment(const Network& net,
                                                     const DispatchResult& result) {
    std::map<Carrier, double> available, dispatched;
    for (const auto& g : net.generators) {
        if (!g.availability) continue;
        auto cap_it = result.generator_capacity.find(g.id);
        auto disp_it = result.generator_dispatch.find(g.id);
        if (cap_it == result.generator_capacity.end() ||
            disp_it == result.generator_dispatch.end())
            throw std::invalid_argument("dispatch result missing generator " + g.id);
        double cap = cap_it->second;
        for (std::size_t t = 0; t < result.weights.size(); ++t) {
            double w = result.weights[t];
            available[g.carrier] += w * g.availability_at(static_cast<int>(t)) * cap;
            dispatched[g.carrier] += w * disp_it->second[t];
        }
    }
    std::map<Carrier, std::optional<double>> out;
    for (const auto& [carrier, avail] : available) {
        if (avail <= 0.0)
            out[carrier] = std::nullopt;
        else
            out[carrier] = (avail - dispatched[carrier]) / avail * 100.0;
    }
    return out;
}

std::map<Carrier, double> carrier_shares(const Network& net, const DispatchResult& result) {
    std::map<Carrier, double> energy;
    double total = 0;
    for (const auto& g : net.generators) {
        auto it = result.generator_dispatch.find(g.id);
        if (it == result.generator_dispatch.end())
            throw std::invalid_argument("dispatch result missing generator " + g.id);
        double e = 0;
        for (std::size_t t = 0; t < result.weights.size(); ++t)
            e += result.weights[t] * it->second[t];
        energy[g.carrier] += e;
        total += e;
    }
    if (total <= 0.0) throw std::invalid_argument("no dispatched energy");
    std::map<Carrier, double> out;
    for (const auto& [carrier, e] : energy) out[carrier] = e / total * 100.0;
    return out;
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string();
}

}  // namespace

std::string IndicatorReport::csv_header() {
    return "method,k,aoe,atr,pearson_load,pearson_wind,pearson_solar,"
           "curtailment_wind,curtailment_solar,t_ref_s,t_agg_s,z_ref,z_agg,"
           "share_wind,share_solar,share_gas,share_waste,share_coal,share_biomass,"
           "t_prep_s,status";
}

std::string IndicatorReport::csv_row() const {
    auto lookup_p = [this](const std::string& key) -> std::optional<double> {
        auto it = pearson_r.find(key);
        return it == pearson_r.end() ? std::nullopt : it->second;
    };
    auto lookup_c = [this](Carrier c) -> std::optional<double> {
        auto it = curtailment_pct.find(c);
        return it == curtailment_pct.end() ? std::nullopt : it->second;
    };
    std::string row = method + "," + std::to_string(k) + "," + cell(aoe) + "," + cell(atr);
    row += "," + cell(lookup_p("load")) + "," + cell(lookup_p("wind")) + "," +
           cell(lookup_p("solar"));
    row += "," + cell(lookup_c(Carrier::wind)) + "," + cell(lookup_c(Carrier::solar));
    row += "," + csv::format_double(t_ref_s) + "," + csv::format_double(t_agg_s);
    row += "," + csv::format_double(z_ref) + "," + csv::format_double(z_agg);
    for (Carrier c : all_carriers) {
        auto it = shares_pct.find(c);
        row += ",";
        if (it != shares_pct.end()) row += csv::format_double(it->second);
    }
    row += "," + csv::format_double(t_prep_s) + "," + status;
    return row;
}

std::string IndicatorReport::to_json() const {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["k"] = k;
    j["status"] = status;
    auto put = [&j](const char* key, const std::optional<double>& v) {
        if (v)
            j[key] = *v;
        else
            j[key] = nullptr;
    };
    put("aoe", aoe);
    put("atr", atr);
    for (const auto& [key, v] : pearson_r) {
        put(("pearson_" + key).c_str(), v);
        // the literal printed indicator is 1 - r; kept under its own key
        if (v)
            j["one_minus_pearson_" + key] = 1.0 - *v;
        else
            j["one_minus_pearson_" + key] = nullptr;
    }
    for (const auto& [c, v] : curtailment_pct)
        put(("curtailment_" + std::string(to_string(c))).c_str(), v);
    for (const auto& [c, v] : shares_pct) j["share_" + std::string(to_string(c))] = v;
    j["t_ref_s"] = t_ref_s;
    j["t_agg_s"] = t_agg_s;
    j["t_prep_s"] = t_prep_s;
    j["z_ref"] = z_ref;
    j["z_agg"] = z_agg;
    return j.dump(2);
}

}  // namespace lopf
