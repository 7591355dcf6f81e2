#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "formulation.hpp"
#include "solver.hpp"

namespace leakage {

// Everything needed to reproduce one optimisation run from scratch.
struct ScenarioSpec {
    double mu = 80;     // base carbon price
    double alpha = 0;   // distribution parameter

    // time series source
    bool synthetic = true;
    std::uint64_t seed = 7;
    std::string data_dir;  // CSV directory when synthetic == false

    // horizon: 0 = use the full series (external data only)
    std::size_t hours = 336;
    // "seasonal": spread synthetic hours over four blocks of the year;
    // "head": consecutive hours from the start
    std::string sampling = "seasonal";

    double timestep_weight_h = 1.0;
    bool cyclic_storage = true;
    double battery_hours = 6.0;
    bool annualize = true;
};

// Builds the full inputs (bundled network, series, pricing) for a spec.
ScenarioInputs assemble_scenario(const ScenarioSpec& spec);

// Scenario directory layout: scenario.json + solution.csv. Post-processing
// commands (report/trace/export-mps) rebuild the inputs from the stored
// ScenarioSpec.
void write_scenario_dir(const std::filesystem::path& dir, const ScenarioSpec& spec,
                        const LinearProgram& lp, const Solution& solution);

struct LoadedScenario {
    ScenarioSpec spec;
    ScenarioInputs inputs;
    LinearProgram lp;
    Solution solution;
};

LoadedScenario load_scenario_dir(const std::filesystem::path& dir);

ScenarioSpec scenario_spec_from_json(const std::string& json_text);
std::string scenario_spec_to_json(const ScenarioSpec& spec, const Solution* solution = nullptr);

}  // namespace leakage
