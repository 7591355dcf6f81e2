#include "pricing.hpp"

#include <algorithm>

#include "common.hpp"

namespace leakage {

double demand_weighted_gdp(const std::vector<Region>& regions) {
    if (regions.empty()) throw DataError("demand_weighted_gdp: empty region list");
    double num = 0, den = 0;
    for (const auto& r : regions) {
        num += r.gdp_per_capita * r.mean_demand_gw;
        den += r.mean_demand_gw;
    }
    return num / den;
}

double effective_price(double gdp_per_capita, double base_price, double alpha,
                       double reference_gdp) {
    double raw = base_price * (1.0 + alpha * (gdp_per_capita / reference_gdp - 1.0));
    return std::max(0.0, raw);
}

std::optional<double> clipping_threshold_alpha(const std::vector<Region>& regions) {
    double reference = demand_weighted_gdp(regions);
    double gdp_min = regions.front().gdp_per_capita;
    for (const auto& r : regions) gdp_min = std::min(gdp_min, r.gdp_per_capita);
    if (gdp_min >= reference) return std::nullopt;  // prices never clip
    return 1.0 / (1.0 - gdp_min / reference);
}

PricingScheme make_pricing(const Network& network, double base_price, double alpha) {
    if (base_price < 0 || alpha < 0)
        throw DataError("pricing: base price and alpha must be non-negative");
    PricingScheme s;
    s.base_price = base_price;
    s.alpha = alpha;
    s.reference_gdp = demand_weighted_gdp(network.regions);
    s.effective_price.reserve(network.regions.size());
    for (const auto& r : network.regions)
        s.effective_price.push_back(
            effective_price(r.gdp_per_capita, base_price, alpha, s.reference_gdp));
    return s;
}

}  // namespace leakage
