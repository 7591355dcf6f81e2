#pragma once

#include <cstddef>
#include <string>

#include "lp.hpp"
#include "model.hpp"
#include "pricing.hpp"

namespace leakage {

struct FormulationOptions {
    // true: SOC wraps around the horizon; false: SOC_0 anchored at 50% of
    // energy capacity with a free final state.
    bool cyclic_storage = true;
    double battery_hours = 6.0;     // energy-to-power ratio for extendable storage
    double timestep_weight_h = 1.0; // hours represented by one step (w)
    bool annualize = true;          // scale per-MWh terms by 8760 / (T * w)
};

// Everything that determines one optimisation run.
struct ScenarioInputs {
    Network network;
    TimeSeriesSet series;
    PricingScheme pricing;
    FormulationOptions options;

    std::size_t steps() const { return series.steps(); }
    double step_hours() const { return options.timestep_weight_h; }
    // Factor converting sampled-period energies to per-annum figures.
    double year_scale() const {
        double span = double(steps()) * options.timestep_weight_h;
        return options.annualize ? 8760.0 / span : 1.0;
    }

    void validate() const;  // series aligned to network, options sane
};

// Marginal generation cost with the regional carbon price folded in:
// o_s + price * e_s.
double effective_marginal_cost(const CarrierSpec& carrier, double region_price);

// Closed-form size census of the LP build_lp would emit.
struct LpCensus {
    std::size_t balance_rows = 0;
    std::size_t dispatch_bound_rows = 0;  // gen/store/dispatch vs capacity coupling
    std::size_t energy_bound_rows = 0;    // SOC vs capacity coupling
    std::size_t soc_rows = 0;
    std::size_t capacity_columns = 0;
    std::size_t dispatch_columns = 0;  // gen + store + dispatch
    std::size_t soc_columns = 0;
    std::size_t spill_columns = 0;
    std::size_t flow_columns = 0;

    std::size_t total_rows() const {
        return balance_rows + dispatch_bound_rows + energy_bound_rows + soc_rows;
    }
    std::size_t total_columns() const {
        return capacity_columns + dispatch_columns + soc_columns + spill_columns + flow_columns;
    }
    std::string describe() const;
};

LpCensus census(const ScenarioInputs& inputs);

// Translates the scenario into the investment/dispatch linear program:
// annualised capital cost plus (carbon-adjusted) marginal cost, nodal power
// balance per region and step, dispatch limited by installed capacity times
// the availability series, storage state-of-charge recursion with inflow and
// spillage, and symmetric transmission limits.
LinearProgram build_lp(const ScenarioInputs& inputs);

// Column/row name helpers shared with post-processing.
namespace names {
std::string cap(const Network& n, std::size_t r, const std::string& carrier);
std::string gen(const Network& n, std::size_t r, const std::string& carrier, std::size_t t);
std::string store(const Network& n, std::size_t r, const std::string& carrier, std::size_t t);
std::string dispatch(const Network& n, std::size_t r, const std::string& carrier, std::size_t t);
std::string soc(const Network& n, std::size_t r, const std::string& carrier, std::size_t t);
std::string spill(const Network& n, std::size_t r, const std::string& carrier, std::size_t t);
std::string flow(const Network& n, std::size_t l, std::size_t t);
std::string balance(const Network& n, std::size_t r, std::size_t t);
}  // namespace names

}  // namespace leakage
