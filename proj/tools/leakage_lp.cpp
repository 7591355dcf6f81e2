// leakage-lp: command line front end over the shared C API.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

#include "leakage/leakage.h"

namespace {

int report_failure(lkg_status status) {
    std::fprintf(stderr, "error: %s\n", lkg_last_error());
    return int(status);
}

struct ScenarioArgs {
    double mu = 80;
    double alpha = 0;
    std::string data_dir;
    std::uint64_t seed = 7;
    bool seed_given = false;
    std::size_t hours = 336;
    std::string sampling = "seasonal";
    double weight = 1.0;
    double battery_hours = 6.0;
    bool no_cyclic = false;
    bool no_annualize = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--mu", mu, "base carbon price [mu/tCO2]");
        cmd->add_option("--alpha", alpha, "distribution parameter");
        auto* data = cmd->add_option("--data", data_dir, "directory with input CSV files");
        auto* seed_opt =
            cmd->add_option("--synthetic-seed", seed, "seed for the synthetic time series");
        data->excludes(seed_opt);
        cmd->add_option("--hours", hours, "optimisation horizon in steps (0 = full series)");
        cmd->add_option("--sampling", sampling, "synthetic sampling: seasonal|head");
        cmd->add_option("--weight", weight, "hours represented by one step");
        cmd->add_option("--battery-hours", battery_hours, "battery energy-to-power ratio");
        cmd->add_flag("--fixed-initial-soc", no_cyclic,
                      "anchor storage at 50% instead of cyclic wrap");
        cmd->add_flag("--no-annualize", no_annualize, "report sampled-period costs");
    }

    lkg_status apply(lkg_scenario* scenario) const {
        lkg_status rc;
        if ((rc = lkg_scenario_set_prices(scenario, mu, alpha)) != LKG_OK) return rc;
        if (!data_dir.empty()) {
            if ((rc = lkg_scenario_set_data_dir(scenario, data_dir.c_str())) != LKG_OK) return rc;
        } else {
            if ((rc = lkg_scenario_set_synthetic(scenario, seed)) != LKG_OK) return rc;
        }
        if ((rc = lkg_scenario_set_hours(scenario, hours)) != LKG_OK) return rc;
        auto set = [&](const char* key, const std::string& value) {
            return lkg_scenario_set_option(scenario, key, value.c_str());
        };
        if ((rc = set("sampling", sampling)) != LKG_OK) return rc;
        if ((rc = set("timestep_weight_h", std::to_string(weight))) != LKG_OK) return rc;
        if ((rc = set("battery_hours", std::to_string(battery_hours))) != LKG_OK) return rc;
        if ((rc = set("cyclic_storage", no_cyclic ? "false" : "true")) != LKG_OK) return rc;
        if ((rc = set("annualize", no_annualize ? "false" : "true")) != LKG_OK) return rc;
        return LKG_OK;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"carbon-leakage study on an 11-region European power network"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lkg_version());

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "optimise one scenario into a directory");
    ScenarioArgs solve_args;
    solve_args.add_to(solve_cmd);
    std::string solve_out;
    solve_cmd->add_option("--out", solve_out, "scenario output directory")->required();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a (mu, alpha) grid from a config file");
    std::string sweep_config;
    bool sweep_force = false;
    sweep_cmd->add_option("--config", sweep_config, "flat TOML sweep configuration")->required();
    sweep_cmd->add_flag("--force", sweep_force, "recompute existing grid points");

    // trace
    auto* trace_cmd = app.add_subcommand("trace", "carbon flow tracing for a solved scenario");
    std::string trace_dir;
    trace_cmd->add_option("--scenario", trace_dir, "scenario directory")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "regional cost report for a solved scenario");
    std::string report_dir;
    report_cmd->add_option("--scenario", report_dir, "scenario directory")->required();

    // charts
    auto* charts_cmd = app.add_subcommand("charts", "render SVG charts from a sweep store");
    std::string charts_dir;
    charts_cmd->add_option("--store", charts_dir, "sweep output directory")->required();

    // export-mps
    auto* mps_cmd = app.add_subcommand("export-mps", "write the scenario LP as free-format MPS");
    std::string mps_scenario, mps_out;
    mps_cmd->add_option("--scenario", mps_scenario, "scenario directory")->required();
    mps_cmd->add_option("--out", mps_out, "output file (default: <scenario>/model.mps)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : int(LKG_ERROR_USAGE);
    }

    if (solve_cmd->parsed()) {
        lkg_scenario* scenario = nullptr;
        lkg_status rc = lkg_scenario_create(&scenario);
        if (rc != LKG_OK) return report_failure(rc);
        if ((rc = solve_args.apply(scenario)) != LKG_OK) {
            lkg_scenario_free(scenario);
            return report_failure(rc);
        }
        char census[512];
        if (lkg_scenario_census(scenario, census, sizeof(census)) == LKG_OK)
            std::printf("%s\n", census);
        rc = lkg_solve_to_dir(scenario, solve_out.c_str());
        lkg_scenario_free(scenario);
        if (rc != LKG_OK) return report_failure(rc);
        std::printf("scenario written to %s\n", solve_out.c_str());
        return 0;
    }
    if (sweep_cmd->parsed()) {
        lkg_status rc = lkg_sweep_run(sweep_config.c_str(), sweep_force ? 1 : 0);
        if (rc != LKG_OK) return report_failure(rc);
        std::printf("sweep complete\n");
        return 0;
    }
    if (trace_cmd->parsed()) {
        lkg_status rc = lkg_trace_dir(trace_dir.c_str());
        if (rc != LKG_OK) return report_failure(rc);
        std::printf("allocation written to %s\n", trace_dir.c_str());
        return 0;
    }
    if (report_cmd->parsed()) {
        lkg_status rc = lkg_report_dir(report_dir.c_str());
        if (rc != LKG_OK) return report_failure(rc);
        std::printf("report written to %s\n", report_dir.c_str());
        return 0;
    }
    if (charts_cmd->parsed()) {
        lkg_status rc = lkg_render_charts(charts_dir.c_str());
        if (rc != LKG_OK) return report_failure(rc);
        std::printf("charts written to %s\n", charts_dir.c_str());
        return 0;
    }
    if (mps_cmd->parsed()) {
        std::string out = mps_out.empty() ? mps_scenario + "/model.mps" : mps_out;
        lkg_status rc = lkg_export_mps(mps_scenario.c_str(), out.c_str());
        if (rc != LKG_OK) return report_failure(rc);
        std::printf("mps written to %s\n", out.c_str());
        return 0;
    }
    return int(LKG_ERROR_USAGE);
}
