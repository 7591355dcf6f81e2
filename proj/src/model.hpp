#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace leakage {

// One aggregated network node.
struct Region {
    int id = 0;
    std::string name;
    std::string short_code;      // two letters, unique
    double gdp_per_capita = 0;   // mu per person
    double population = 0;       // persons
    double mean_demand_gw = 0;   // average hourly electricity demand
};

// Transmission corridor between two regions; flows are signed, capacity symmetric.
struct Link {
    int from_region = 0;
    int to_region = 0;
    double capacity_mw = 0;
};

enum class CarrierKind { Generator, Storage };

// Techno-economic description of a generation or storage technology.
struct CarrierSpec {
    std::string name;
    CarrierKind kind = CarrierKind::Generator;
    double capital_cost = 0;     // mu per MW per year (annualised)
    double marginal_cost = 0;    // mu per MWh
    double emission_factor = 0;  // tCO2 per MWh
    bool extendable = true;
    bool uses_capacity_factor_series = false;
    double charge_efficiency = 1.0;     // eta_1
    double discharge_efficiency = 1.0;  // eta_2
    double standing_efficiency = 1.0;   // eta_0
    double energy_to_power_hours = 0;   // storage only; 0 = fixed per-region energy
    bool grid_charging = false;         // storage only; reservoirs cannot pump from the grid
};

// Hourly input series aligned to a network. Index order is [region][step].
struct TimeSeriesSet {
    std::vector<std::int64_t> timestamps;                            // epoch seconds, hourly
    std::vector<std::vector<double>> demand_mw;                      // [region][t]
    std::map<std::string, std::vector<std::vector<double>>> capacity_factor;  // carrier -> [region][t]
    std::vector<std::vector<double>> hydro_inflow_mwh;               // [region][t], MWh per hour
    std::vector<double> hydro_energy_capacity_mwh;                   // [region]
    std::vector<double> hydro_power_capacity_mw;                     // [region]

    std::size_t steps() const { return timestamps.size(); }

    // Keeps rows whose index is listed in `hours` (strictly increasing).
    TimeSeriesSet sample_hours(const std::vector<std::size_t>& hours) const;
};

struct Network {
    std::vector<Region> regions;
    std::vector<Link> links;
    std::vector<CarrierSpec> carriers;

    int region_index(std::string_view short_code) const;  // -1 if absent
    const CarrierSpec* carrier(std::string_view name) const;

    // Signed incidence entry K[region][link]: +1 at from_region, -1 at to_region.
    double incidence(int region, int link) const;

    // Checks the structural invariants (unique short codes, positive values,
    // one link per region pair, connected graph). Throws DataError.
    void validate() const;
};

// The bundled 11-region / 21-link European network with the six default
// carriers (wind, solar, coal, gas, hydro, battery).
Network default_network();

// Per-region reservoir hydro defaults bundled with the library. These are
// placeholder values; operators should supply their own hydro.csv.
struct HydroDefaults {
    std::string short_code;
    double power_mw;
    double energy_mwh;
};
const std::vector<HydroDefaults>& default_hydro();

// Deterministic synthetic series: daily demand cycle plus seeded smooth noise,
// day/night solar with a seasonal envelope, seeded smooth wind, constant
// hydro inflow. Identical inputs produce identical output.
TimeSeriesSet synthetic_timeseries(const Network& network, std::size_t hours, std::uint64_t seed);

// Reads demand.csv, capacity_factor_<carrier>.csv, inflow.csv and hydro.csv
// from `dir` and validates them against the network. Errors carry file,
// column and row context.
TimeSeriesSet load_timeseries(const std::filesystem::path& dir, const Network& network);

// Writes the same file set load_timeseries reads; load(save(x)) == x.
void save_timeseries(const TimeSeriesSet& series, const Network& network,
                     const std::filesystem::path& dir);

}  // namespace leakage
