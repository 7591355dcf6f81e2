/* leakage: carbon-leakage study library for an 11-region European power
 * system. C interface over the C++ core; all functions return lkg_status
 * and report details through lkg_last_error(). Handles are opaque and owned
 * by the caller via the matching *_free function.
 */
#ifndef LEAKAGE_LEAKAGE_H
#define LEAKAGE_LEAKAGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lkg_status {
    LKG_OK = 0,
    LKG_ERROR_USAGE = 1,  /* invalid arguments or handle misuse */
    LKG_ERROR_DATA = 2,   /* input files or values failed validation */
    LKG_ERROR_SOLVER = 3  /* optimisation failed */
} lkg_status;

typedef struct lkg_network lkg_network;
typedef struct lkg_scenario lkg_scenario;
typedef struct lkg_result lkg_result;

const char* lkg_version(void);
/* message of the last failing call on the current thread ("" if none) */
const char* lkg_last_error(void);

/* ---- network ---------------------------------------------------------- */

/* the bundled 11-region / 21-link European network */
lkg_status lkg_network_default(lkg_network** out);
void lkg_network_free(lkg_network* net);

int lkg_network_region_count(const lkg_network* net);
int lkg_network_link_count(const lkg_network* net);
double lkg_network_total_link_capacity_mw(const lkg_network* net);
lkg_status lkg_network_region_code(const lkg_network* net, int index, char* buf, size_t cap);

/* demand-weighted average GDP per capita over the network's regions */
double lkg_demand_weighted_gdp(const lkg_network* net);
/* effective carbon price of one region under (mu, alpha), clipped at zero */
double lkg_effective_price(const lkg_network* net, int region, double mu, double alpha);
/* smallest alpha at which some region clips to zero; 0 if clipping never
 * occurs */
double lkg_clipping_threshold_alpha(const lkg_network* net);

/* ---- scenario ---------------------------------------------------------- */

/* defaults: mu 80, alpha 0, synthetic seed 7, 336 hours, seasonal sampling */
lkg_status lkg_scenario_create(lkg_scenario** out);
void lkg_scenario_free(lkg_scenario* scenario);

lkg_status lkg_scenario_set_prices(lkg_scenario* scenario, double mu, double alpha);
lkg_status lkg_scenario_set_synthetic(lkg_scenario* scenario, uint64_t seed);
lkg_status lkg_scenario_set_data_dir(lkg_scenario* scenario, const char* dir);
/* hours = 0: use the full series (external data only) */
lkg_status lkg_scenario_set_hours(lkg_scenario* scenario, size_t hours);
/* keys: sampling ("seasonal"|"head"), timestep_weight_h, cyclic_storage,
 * battery_hours, annualize */
lkg_status lkg_scenario_set_option(lkg_scenario* scenario, const char* key, const char* value);

/* row/column census of the linear program the scenario would build */
lkg_status lkg_scenario_census(const lkg_scenario* scenario, char* buf, size_t cap);

/* ---- solving and post-processing --------------------------------------- */

lkg_status lkg_solve(const lkg_scenario* scenario, lkg_result** out);
void lkg_result_free(lkg_result* result);

double lkg_result_objective(const lkg_result* result);
int lkg_result_iterations(const lkg_result* result);
double lkg_result_conventional_share(const lkg_result* result);
double lkg_result_total_lcoe(const lkg_result* result);
double lkg_result_co2_total(const lkg_result* result);

/* solve and persist a scenario directory (scenario.json + solution.csv) */
lkg_status lkg_solve_to_dir(const lkg_scenario* scenario, const char* out_dir);
/* regional cost report: report.csv and links.csv inside the directory */
lkg_status lkg_report_dir(const char* scenario_dir);
/* flow tracing: allocation.csv, co2_by_sink.csv, co2_by_link.csv */
lkg_status lkg_trace_dir(const char* scenario_dir);
/* free-format MPS export of the scenario's linear program */
lkg_status lkg_export_mps(const char* scenario_dir, const char* mps_path);

/* parameter sweep driven by a flat TOML config file */
lkg_status lkg_sweep_run(const char* config_path, int force);
/* SVG charts from a sweep store */
lkg_status lkg_render_charts(const char* store_dir);

#ifdef __cplusplus
}
#endif

#endif /* LEAKAGE_LEAKAGE_H */
