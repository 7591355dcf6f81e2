#pragma once

#include <cstddef>
#include <vector>

#include "formulation.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace leakage {

// Nodal production/consumption and link flows at one timestep.
//
// Net injections/withdrawals feed the allocation matrix; gross quantities
// carry the local self-supply so that every generated MWh is attributed.
struct FlowSnapshot {
    std::size_t t = 0;
    std::vector<double> injection_mw;       // net p+, >= 0
    std::vector<double> withdrawal_mw;      // net p-, >= 0
    std::vector<double> production_mw;      // gross generation + storage discharge
    std::vector<double> consumption_mw;     // gross demand + storage charging
    std::vector<std::vector<double>> production_by_carrier;  // [carrier][region]
    std::vector<double> link_flow_mw;       // signed, positive from -> to

    // Throws DataError when nodal balances or total balance are violated
    // beyond 1e-6 relative to the snapshot scale.
    void check(const Network& network) const;
};

// Result of one Average Participation pass.
struct TracedStep {
    // allocation[source][sink]: MW attributed source -> sink (gross, local
    // self-supply included on the diagonal)
    std::vector<std::vector<double>> allocation;
    // node_mix[node][source]: fraction of the node's net throughput that
    // originated at `source`; rows sum to 1 for nodes on a flow path
    std::vector<std::vector<double>> node_mix;
};

// Per-horizon CO2 accounts derived from the peer-to-peer allocation.
struct AllocationResult {
    struct Transfer {
        std::size_t t;
        int source, sink, carrier;
        double mwh;
    };
    std::vector<Transfer> transfers;               // sparse peer-to-peer energy
    std::vector<double> co2_by_sink_t;             // per region, metric tons
    std::vector<std::vector<double>> co2_by_link_t;  // [carrier][link], gross tons moved
    double co2_total_t = 0;                        // generation-side total
};

// Extracts the snapshot for step t from an optimal solution. Storage
// charging counts as consumption; discharging as production of the storage
// carrier.
FlowSnapshot snapshot_from_solution(const ScenarioInputs& inputs, const LinearProgram& lp,
                                    const Solution& solution, std::size_t t);

// Average Participation: distributes every node's inflows proportionally
// over its outflows by solving the injection system
// (diag p+ + K^- diag f K^T) Q = diag p+ restricted to active sources.
TracedStep average_participation(const FlowSnapshot& snapshot, const Network& network);

// Runs the allocation for every timestep and converts the traced energy to
// CO2 at sink and link level. Conservation against the generation-side total
// is enforced to 1e-6 relative.
AllocationResult allocate_co2(const ScenarioInputs& inputs, const LinearProgram& lp,
                              const Solution& solution);

}  // namespace leakage
