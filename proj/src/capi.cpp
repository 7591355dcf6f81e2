#include "leakage/leakage.h"

#include <cstring>
#include <fstream>
#include <string>

#include "charts.hpp"
#include "common.hpp"
#include "csv.hpp"
#include "formulation.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "mps.hpp"
#include "pricing.hpp"
#include "scenario.hpp"
#include "solver.hpp"
#include "sweep.hpp"
#include "tracing.hpp"

using namespace leakage;

extern "C" {

struct lkg_network {
    Network rep;
};

struct lkg_scenario {
    ScenarioSpec rep;
};

struct lkg_result {
    Solution solution;
    SystemSummary summary;
};

}  // extern "C"

namespace {

thread_local std::string g_last_error;

lkg_status fail(lkg_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
lkg_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const DataError& e) {
        return fail(LKG_ERROR_DATA, e.what());
    } catch (const SolverError& e) {
        return fail(LKG_ERROR_SOLVER, e.what());
    } catch (const std::exception& e) {
        return fail(LKG_ERROR_USAGE, e.what());
    }
}

lkg_status copy_string(const std::string& s, char* buf, size_t cap) {
    if (!buf || cap == 0) return fail(LKG_ERROR_USAGE, "null buffer");
    if (s.size() + 1 > cap) return fail(LKG_ERROR_USAGE, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return LKG_OK;
}

}  // namespace

extern "C" {

const char* lkg_version(void) { return version_string(); }

const char* lkg_last_error(void) { return g_last_error.c_str(); }

/* ---- network ---------------------------------------------------------- */

lkg_status lkg_network_default(lkg_network** out) {
    if (!out) return fail(LKG_ERROR_USAGE, "null output pointer");
    return guarded([&] {
        *out = new lkg_network{default_network()};
        return LKG_OK;
    });
}

void lkg_network_free(lkg_network* net) { delete net; }

int lkg_network_region_count(const lkg_network* net) {
    return net ? int(net->rep.regions.size()) : -1;
}

int lkg_network_link_count(const lkg_network* net) {
    return net ? int(net->rep.links.size()) : -1;
}

double lkg_network_total_link_capacity_mw(const lkg_network* net) {
    if (!net) return -1;
    double total = 0;
    for (const auto& l : net->rep.links) total += l.capacity_mw;
    return total;
}

lkg_status lkg_network_region_code(const lkg_network* net, int index, char* buf, size_t cap) {
    if (!net) return fail(LKG_ERROR_USAGE, "null network");
    if (index < 0 || index >= int(net->rep.regions.size()))
        return fail(LKG_ERROR_USAGE, "region index out of range");
    return copy_string(net->rep.regions[std::size_t(index)].short_code, buf, cap);
}

double lkg_demand_weighted_gdp(const lkg_network* net) {
    if (!net) return -1;
    return demand_weighted_gdp(net->rep.regions);
}

double lkg_effective_price(const lkg_network* net, int region, double mu, double alpha) {
    if (!net || region < 0 || region >= int(net->rep.regions.size())) return -1;
    double reference = demand_weighted_gdp(net->rep.regions);
    return effective_price(net->rep.regions[std::size_t(region)].gdp_per_capita, mu, alpha,
                           reference);
}

double lkg_clipping_threshold_alpha(const lkg_network* net) {
    if (!net) return -1;
    auto threshold = clipping_threshold_alpha(net->rep.regions);
    return threshold ? *threshold : 0.0;
}

/* ---- scenario ---------------------------------------------------------- */

lkg_status lkg_scenario_create(lkg_scenario** out) {
    if (!out) return fail(LKG_ERROR_USAGE, "null output pointer");
    *out = new lkg_scenario{};
    return LKG_OK;
}

void lkg_scenario_free(lkg_scenario* scenario) { delete scenario; }

lkg_status lkg_scenario_set_prices(lkg_scenario* s, double mu, double alpha) {
    if (!s) return fail(LKG_ERROR_USAGE, "null scenario");
    if (mu < 0 || alpha < 0) return fail(LKG_ERROR_DATA, "mu and alpha must be non-negative");
    s->rep.mu = mu;
    s->rep.alpha = alpha;
    return LKG_OK;
}

lkg_status lkg_scenario_set_synthetic(lkg_scenario* s, uint64_t seed) {
    if (!s) return fail(LKG_ERROR_USAGE, "null scenario");
    s->rep.synthetic = true;
    s->rep.seed = seed;
    s->rep.data_dir.clear();
    return LKG_OK;
}

lkg_status lkg_scenario_set_data_dir(lkg_scenario* s, const char* dir) {
    if (!s || !dir) return fail(LKG_ERROR_USAGE, "null scenario or directory");
    s->rep.synthetic = false;
    s->rep.data_dir = dir;
    return LKG_OK;
}

lkg_status lkg_scenario_set_hours(lkg_scenario* s, size_t hours) {
    if (!s) return fail(LKG_ERROR_USAGE, "null scenario");
    s->rep.hours = hours;
    return LKG_OK;
}

lkg_status lkg_scenario_set_option(lkg_scenario* s, const char* key, const char* value) {
    if (!s || !key || !value) return fail(LKG_ERROR_USAGE, "null argument");
    std::string k = key, v = value;
    return guarded([&] {
        if (k == "sampling") {
            if (v != "seasonal" && v != "head")
                return fail(LKG_ERROR_DATA, "sampling must be 'seasonal' or 'head'");
            s->rep.sampling = v;
        } else if (k == "timestep_weight_h") {
            double w;
            if (!csv::parse_double(v, w) || w < 1)
                return fail(LKG_ERROR_DATA, "timestep_weight_h must be >= 1");
            s->rep.timestep_weight_h = w;
        } else if (k == "battery_hours") {
            double h;
            if (!csv::parse_double(v, h) || h <= 0)
                return fail(LKG_ERROR_DATA, "battery_hours must be positive");
            s->rep.battery_hours = h;
        } else if (k == "cyclic_storage") {
            s->rep.cyclic_storage = v == "true";
        } else if (k == "annualize") {
            s->rep.annualize = v == "true";
        } else {
            return fail(LKG_ERROR_USAGE, "unknown option '" + k + "'");
        }
        return LKG_OK;
    });
}

lkg_status lkg_scenario_census(const lkg_scenario* s, char* buf, size_t cap) {
    if (!s) return fail(LKG_ERROR_USAGE, "null scenario");
    return guarded([&] {
        ScenarioInputs inputs = assemble_scenario(s->rep);
        return copy_string(census(inputs).describe(), buf, cap);
    });
}

/* ---- solving and post-processing --------------------------------------- */

lkg_status lkg_solve(const lkg_scenario* s, lkg_result** out) {
    if (!s || !out) return fail(LKG_ERROR_USAGE, "null argument");
    return guarded([&] {
        ScenarioInputs inputs = assemble_scenario(s->rep);
        LinearProgram lp = build_lp(inputs);
        Solution sol = solve(lp);
        if (sol.status != SolveStatus::Optimal)
            return fail(LKG_ERROR_SOLVER, "no optimal solution: " + sol.message);
        auto* result = new lkg_result{std::move(sol), {}};
        result->summary = system_summary(inputs, lp, result->solution);
        *out = result;
        return LKG_OK;
    });
}

void lkg_result_free(lkg_result* result) { delete result; }

double lkg_result_objective(const lkg_result* r) { return r ? r->solution.objective : 0; }

int lkg_result_iterations(const lkg_result* r) { return r ? r->solution.stats.iterations : -1; }

double lkg_result_conventional_share(const lkg_result* r) {
    return r ? r->summary.conventional_share : -1;
}

double lkg_result_total_lcoe(const lkg_result* r) { return r ? r->summary.total_lcoe : -1; }

double lkg_result_co2_total(const lkg_result* r) { return r ? r->summary.co2_total_t : -1; }

lkg_status lkg_solve_to_dir(const lkg_scenario* s, const char* out_dir) {
    if (!s || !out_dir) return fail(LKG_ERROR_USAGE, "null argument");
    return guarded([&] {
        ScenarioInputs inputs = assemble_scenario(s->rep);
        LinearProgram lp = build_lp(inputs);
        Solution sol = solve(lp);
        if (sol.status != SolveStatus::Optimal)
            return fail(LKG_ERROR_SOLVER, "no optimal solution: " + sol.message);
        write_scenario_dir(out_dir, s->rep, lp, sol);
        return LKG_OK;
    });
}

lkg_status lkg_report_dir(const char* scenario_dir) {
    if (!scenario_dir) return fail(LKG_ERROR_USAGE, "null directory");
    return guarded([&] {
        LoadedScenario loaded = load_scenario_dir(scenario_dir);
        CostReport report = cost_report(loaded.inputs, loaded.lp, loaded.solution);
        std::filesystem::path dir(scenario_dir);
        csv::write_file_atomic(dir / "report.csv", report_csv(loaded.inputs.network, report));
        csv::write_file_atomic(dir / "links.csv", links_csv(loaded.inputs.network, report));
        return LKG_OK;
    });
}

lkg_status lkg_trace_dir(const char* scenario_dir) {
    if (!scenario_dir) return fail(LKG_ERROR_USAGE, "null directory");
    return guarded([&] {
        LoadedScenario loaded = load_scenario_dir(scenario_dir);
        const Network& net = loaded.inputs.network;
        AllocationResult alloc = allocate_co2(loaded.inputs, loaded.lp, loaded.solution);
        std::filesystem::path dir(scenario_dir);

        std::string transfers = "t,source,sink,carrier,mwh\n";
        for (const auto& tr : alloc.transfers) {
            transfers += std::to_string(tr.t) + "," +
                         net.regions[std::size_t(tr.source)].short_code + "," +
                         net.regions[std::size_t(tr.sink)].short_code + "," +
                         net.carriers[std::size_t(tr.carrier)].name + "," +
                         csv::format_double(tr.mwh) + "\n";
        }
        csv::write_file_atomic(dir / "allocation.csv", transfers);

        // carbon embodied in cross-border deliveries, per receiving/sending region
        std::vector<double> co2_import(net.regions.size(), 0.0);
        std::vector<double> co2_export(net.regions.size(), 0.0);
        for (const auto& tr : alloc.transfers) {
            if (tr.source == tr.sink) continue;
            double co2 = tr.mwh * net.carriers[std::size_t(tr.carrier)].emission_factor;
            co2_import[std::size_t(tr.sink)] += co2;
            co2_export[std::size_t(tr.source)] += co2;
        }
        std::string sinks = "region,co2_t,co2_net_import_t\n";
        for (std::size_t r = 0; r < net.regions.size(); ++r)
            sinks += net.regions[r].short_code + "," +
                     csv::format_double(alloc.co2_by_sink_t[r]) + "," +
                     csv::format_double(co2_import[r] - co2_export[r]) + "\n";
        csv::write_file_atomic(dir / "co2_by_sink.csv", sinks);

        std::string links = "link,carrier,co2_t\n";
        for (std::size_t l = 0; l < net.links.size(); ++l) {
            for (std::size_t si = 0; si < net.carriers.size(); ++si) {
                if (net.carriers[si].emission_factor <= 0) continue;
                links += net.regions[std::size_t(net.links[l].from_region)].short_code + "-" +
                         net.regions[std::size_t(net.links[l].to_region)].short_code + "," +
                         net.carriers[si].name + "," +
                         csv::format_double(alloc.co2_by_link_t[si][l]) + "\n";
            }
        }
        csv::write_file_atomic(dir / "co2_by_link.csv", links);
        return LKG_OK;
    });
}

lkg_status lkg_export_mps(const char* scenario_dir, const char* mps_path) {
    if (!scenario_dir || !mps_path) return fail(LKG_ERROR_USAGE, "null argument");
    return guarded([&] {
        std::ifstream in(std::filesystem::path(scenario_dir) / "scenario.json");
        if (!in) return fail(LKG_ERROR_DATA, std::string(scenario_dir) + ": no scenario.json");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        ScenarioSpec spec = scenario_spec_from_json(text);
        ScenarioInputs inputs = assemble_scenario(spec);
        LinearProgram lp = build_lp(inputs);
        mps::write_file(lp, mps_path);
        return LKG_OK;
    });
}

lkg_status lkg_sweep_run(const char* config_path, int force) {
    if (!config_path) return fail(LKG_ERROR_USAGE, "null config path");
    return guarded([&] {
        SweepConfig cfg = read_sweep_config(config_path);
        SweepOutcome outcome = run_sweep(cfg, force != 0);
        if (outcome.failed > 0)
            return fail(LKG_ERROR_SOLVER,
                        std::to_string(outcome.failed) +
                            " grid points failed; see the error column in summary.csv");
        return LKG_OK;
    });
}

lkg_status lkg_render_charts(const char* store_dir) {
    if (!store_dir) return fail(LKG_ERROR_USAGE, "null store directory");
    return guarded([&] {
        render_charts(store_dir);
        return LKG_OK;
    });
}

}  // extern "C"
