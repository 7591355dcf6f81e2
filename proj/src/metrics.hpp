#pragma once

#include <string>
#include <vector>

#include "formulation.hpp"
#include "solver.hpp"

namespace leakage {

// Per-region cost decomposition, all in mu per annum unless noted.
struct RegionCost {
    double capital_cost = 0;
    double marginal_cost = 0;    // includes the carbon payment
    double carbon_payment = 0;   // informational slice of marginal_cost
    double system_cost = 0;      // capital + marginal
    double consumer_cost = 0;    // sum_t dual(bal) * demand
    double consumer_lcoe = 0;    // mu per MWh of local demand
    double net_profit = 0;       // consumer_cost - system_cost
    double producer_profit = 0;  // price revenue minus cost (scarcity rents)
    double net_import_mwh = 0;   // per annum, negative = exporter
    double demand_mwh = 0;       // per annum
};

struct LinkCost {
    double congestion_rent = 0;  // per annum
    double traffic_mwh = 0;      // |f| integrated, per annum
};

struct CostReport {
    std::vector<RegionCost> regions;  // aligned to network.regions
    std::vector<LinkCost> links;      // aligned to network.links
    double total_system_cost = 0;
    double total_consumer_cost = 0;
    double total_congestion_rent = 0;
    double total_producer_profit = 0;
    double total_demand_mwh = 0;
    double total_lcoe = 0;  // system cost per MWh served
    // | sum(consumer) - sum(system) - rents - producer profits |,
    // relative to total system cost; ~0 by LP duality
    double closure_residual = 0;
};

// Requires an optimal solution with duals.
CostReport cost_report(const ScenarioInputs& inputs, const LinearProgram& lp,
                       const Solution& solution);

// System-wide aggregates per carrier.
struct SystemSummary {
    std::vector<std::string> carrier;
    std::vector<double> capacity_mw;      // built capacity (reservoirs: fixed power)
    std::vector<double> generation_mwh;   // per annum; storage counts discharge
    double battery_exchange_mwh = 0;      // charge + discharge of extendable storage
    double conventional_share = 0;        // carbon-emitting share of primary generation
    double co2_total_t = 0;               // per annum, generation side
    double total_demand_mwh = 0;
    double objective = 0;
    double total_lcoe = 0;
};

SystemSummary system_summary(const ScenarioInputs& inputs, const LinearProgram& lp,
                             const Solution& solution);

// CSV renderings used by the scenario directory layout.
std::string report_csv(const Network& network, const CostReport& report);
std::string links_csv(const Network& network, const CostReport& report);

}  // namespace leakage
