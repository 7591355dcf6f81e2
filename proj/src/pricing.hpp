#pragma once

#include <optional>
#include <vector>

#include "model.hpp"

namespace leakage {

// Regional carbon prices derived from a base price and a GDP-indexed spread.
struct PricingScheme {
    double base_price = 0;     // mu per tCO2
    double alpha = 0;          // spread parameter, >= 0
    double reference_gdp = 0;  // demand-weighted average GDP per capita
    std::vector<double> effective_price;  // per region, mu per tCO2, clipped at 0
};

// Demand-weighted average GDP per capita over the given regions.
double demand_weighted_gdp(const std::vector<Region>& regions);

// max(0, base * (1 + alpha * (gdp / reference_gdp - 1)))
double effective_price(double gdp_per_capita, double base_price, double alpha,
                       double reference_gdp);

// Smallest alpha at which some region's price clips to zero:
// (1 - GDPmin / reference)^-1. Empty when GDPmin >= reference (no clipping
// for any alpha).
std::optional<double> clipping_threshold_alpha(const std::vector<Region>& regions);

// Builds the full scheme for a network.
PricingScheme make_pricing(const Network& network, double base_price, double alpha);

}  // namespace leakage
