#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "scenario.hpp"

namespace leakage {

// Grid of (mu, alpha) points solved over shared inputs.
struct SweepConfig {
    double mu_min = 0, mu_max = 400, mu_step = 4;
    double alpha_min = 0, alpha_max = 3, alpha_step = 0.2;
    ScenarioSpec base;  // mu/alpha are overridden per grid point
    std::string out_dir;
    int parallelism = 2;
    bool details = false;  // also write a scenario directory per point
};

// Flat TOML subset: `key = value` lines with #-comments; strings, numbers
// and booleans.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig read_sweep_config(const std::filesystem::path& path);

// Inclusive grids; endpoints must be reachable within float tolerance.
std::vector<double> grid_axis(double lo, double hi, double step);
std::vector<std::pair<double, double>> sweep_grid(const SweepConfig& config);

struct SweepOutcome {
    std::size_t solved = 0;
    std::size_t skipped = 0;   // points already present in the store
    std::size_t failed = 0;
    std::filesystem::path summary_path;
};

// Runs every grid point, one atomic CSV per point under <out>/points/, then
// merges them into summary.csv sorted by (mu, alpha). Existing points are
// reused unless force is set. Individual failures are recorded per point
// without aborting the sweep.
SweepOutcome run_sweep(const SweepConfig& config, bool force = false);

std::string summary_csv_header();

}  // namespace leakage
