#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "common.hpp"
#include "csv.hpp"

namespace leakage {

int Network::region_index(std::string_view short_code) const {
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (regions[i].short_code == short_code) return int(i);
    }
    return -1;
}

const CarrierSpec* Network::carrier(std::string_view name) const {
    for (const auto& c : carriers) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

double Network::incidence(int region, int link) const {
    const Link& l = links.at(std::size_t(link));
    if (l.from_region == region) return 1.0;
    if (l.to_region == region) return -1.0;
    return 0.0;
}

void Network::validate() const {
    if (regions.empty()) throw DataError("network has no regions");
    std::set<std::string> codes;
    for (const auto& r : regions) {
        if (r.gdp_per_capita <= 0 || r.population <= 0 || r.mean_demand_gw <= 0)
            throw DataError("region " + r.short_code + ": gdp, population and mean demand must be positive");
        if (!codes.insert(r.short_code).second)
            throw DataError("duplicate region short code " + r.short_code);
    }
    std::set<std::pair<int, int>> pairs;
    for (const auto& l : links) {
        if (l.from_region == l.to_region) throw DataError("link connects a region to itself");
        if (l.from_region < 0 || l.from_region >= int(regions.size()) || l.to_region < 0 ||
            l.to_region >= int(regions.size()))
            throw DataError("link references an unknown region");
        if (l.capacity_mw <= 0) throw DataError("link capacity must be positive");
        auto key = std::minmax(l.from_region, l.to_region);
        if (!pairs.insert(key).second)
            throw DataError("duplicate link between " + regions[key.first].short_code + " and " +
                            regions[key.second].short_code);
    }
    for (const auto& c : carriers) {
        if (c.capital_cost < 0 || c.marginal_cost < 0 || c.emission_factor < 0)
            throw DataError("carrier " + c.name + ": costs and emissions must be non-negative");
        auto eff_ok = [](double e) { return e > 0.0 && e <= 1.0; };
        if (!eff_ok(c.charge_efficiency) || !eff_ok(c.discharge_efficiency) ||
            !eff_ok(c.standing_efficiency))
            throw DataError("carrier " + c.name + ": efficiencies must be in (0, 1]");
    }
    // connectivity
    if (!links.empty() && regions.size() > 1) {
        std::vector<char> seen(regions.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            for (const auto& l : links) {
                int other = -1;
                if (l.from_region == n) other = l.to_region;
                if (l.to_region == n) other = l.from_region;
                if (other >= 0 && !seen[std::size_t(other)]) {
                    seen[std::size_t(other)] = 1;
                    stack.push_back(other);
                }
            }
        }
        for (std::size_t i = 0; i < seen.size(); ++i) {
            if (!seen[i]) throw DataError("network graph is not connected: " + regions[i].short_code);
        }
    }
}

Network default_network() {
    Network net;
    auto region = [&](int id, const char* name, const char* code, double gdp, double pop_m,
                      double demand_gw) {
        net.regions.push_back({id, name, code, gdp, pop_m * 1e6, demand_gw});
    };
    region(0, "Scandinavia", "SC", 60149, 26.8, 45.4);
    region(1, "Britain", "GB", 44869, 71.3, 42.1);
    region(2, "Benelux", "BE", 51745, 29.3, 23.8);
    region(3, "France", "FR", 41463, 67.0, 54.3);
    region(4, "Iberia", "IB", 29193, 57.0, 34.8);
    region(5, "Italy", "IT", 34318, 60.4, 36.8);
    region(6, "Alps", "AL", 66877, 17.4, 15.0);
    region(7, "Germany", "DE", 48195, 82.9, 59.1);
    region(8, "Baltic", "BC", 15998, 44.0, 21.6);
    region(9, "Eastern", "EA", 15494, 52.3, 26.2);
    region(10, "Balkans", "BK", 12842, 34.6, 17.5);

    auto link = [&](const char* a, const char* b, double cap) {
        net.links.push_back({net.region_index(a), net.region_index(b), cap});
    };
    link("IB", "FR", 8000);
    link("FR", "BE", 4300);
    link("FR", "GB", 5400);
    link("FR", "IT", 4350);
    link("FR", "AL", 3700);
    link("FR", "DE", 4800);
    link("SC", "GB", 1400);
    link("SC", "DE", 6715);
    link("SC", "BC", 2300);
    link("BE", "DE", 8300);
    link("IT", "AL", 7895);
    link("IT", "BK", 1880);
    link("AL", "DE", 12200);
    link("AL", "BK", 1200);
    link("AL", "EA", 2200);
    link("DE", "BC", 3000);
    link("DE", "EA", 2600);
    link("BC", "EA", 1590);
    link("EA", "BK", 6378);
    link("BE", "GB", 2000);
    link("SC", "BE", 1400);

    CarrierSpec wind;
    wind.name = "wind";
    wind.capital_cost = 127450;
    wind.marginal_cost = 0.01;
    wind.uses_capacity_factor_series = true;
    net.carriers.push_back(wind);

    CarrierSpec solar;
    solar.name = "solar";
    solar.capital_cost = 61550;
    solar.marginal_cost = 0.01;
    solar.uses_capacity_factor_series = true;
    net.carriers.push_back(solar);

    CarrierSpec coal;
    coal.name = "coal";
    coal.capital_cost = 145000;
    coal.marginal_cost = 25;
    coal.emission_factor = 1;
    net.carriers.push_back(coal);

    CarrierSpec gas;
    gas.name = "gas";
    gas.capital_cost = 49400;
    gas.marginal_cost = 58.385;
    gas.emission_factor = 0.635;
    net.carriers.push_back(gas);

    CarrierSpec hydro;
    hydro.name = "hydro";
    hydro.kind = CarrierKind::Storage;
    hydro.capital_cost = 0;
    hydro.extendable = false;
    hydro.grid_charging = false;
    net.carriers.push_back(hydro);

    CarrierSpec battery;
    battery.name = "battery";
    battery.kind = CarrierKind::Storage;
    battery.capital_cost = 120389;
    battery.charge_efficiency = 0.9;
    battery.discharge_efficiency = 0.9;
    battery.energy_to_power_hours = 6;
    battery.grid_charging = true;
    net.carriers.push_back(battery);

    net.validate();
    return net;
}

const std::vector<HydroDefaults>& default_hydro() {
    // Placeholder reservoir sizes, to be overridden by a user hydro.csv.
    static const std::vector<HydroDefaults> table = {
        {"SC", 20000, 2.0e7}, {"GB", 1000, 1.0e5}, {"BE", 100, 5.0e3},
        {"FR", 8000, 2.4e6},  {"IB", 6000, 2.4e6}, {"IT", 6000, 1.8e6},
        {"AL", 10000, 6.0e6}, {"DE", 1500, 2.25e5}, {"BC", 300, 3.0e4},
        {"EA", 2000, 4.0e5},  {"BK", 3000, 9.0e5},
    };
    return table;
}

TimeSeriesSet TimeSeriesSet::sample_hours(const std::vector<std::size_t>& hours) const {
    TimeSeriesSet out;
    out.hydro_energy_capacity_mwh = hydro_energy_capacity_mwh;
    out.hydro_power_capacity_mw = hydro_power_capacity_mw;
    auto pick = [&](const std::vector<double>& v) {
        std::vector<double> r;
        r.reserve(hours.size());
        for (std::size_t h : hours) r.push_back(v.at(h));
        return r;
    };
    for (std::size_t h : hours) out.timestamps.push_back(timestamps.at(h));
    for (const auto& v : demand_mw) out.demand_mw.push_back(pick(v));
    for (const auto& [name, per_region] : capacity_factor) {
        auto& dst = out.capacity_factor[name];
        for (const auto& v : per_region) dst.push_back(pick(v));
    }
    for (const auto& v : hydro_inflow_mwh) out.hydro_inflow_mwh.push_back(pick(v));
    return out;
}

namespace {

// Smooth seeded noise: a small sum of sinusoids with seeded periods and
// phases, normalised to roughly [-1, 1].
struct SmoothNoise {
    std::vector<double> amp, omega, phase;
    double norm = 1;
    SmoothNoise(std::uint64_t seed, double min_period_h, double max_period_h, int terms = 6) {
        SplitMix64 rng(seed);
        double total = 0;
        for (int k = 0; k < terms; ++k) {
            double a = 0.5 + rng.uniform();
            double period = rng.uniform(min_period_h, max_period_h);
            amp.push_back(a);
            omega.push_back(2.0 * std::numbers::pi / period);
            phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
            total += a;
        }
        norm = total;
    }
    double operator()(double t) const {
        double s = 0;
        for (std::size_t k = 0; k < amp.size(); ++k) s += amp[k] * std::sin(omega[k] * t + phase[k]);
        return s / norm;
    }
};

constexpr std::int64_t kSyntheticEpoch = 1356998400;  // 2013-01-01T00:00:00

}  // namespace

TimeSeriesSet synthetic_timeseries(const Network& network, std::size_t hours, std::uint64_t seed) {
    if (hours == 0) throw DataError("synthetic_timeseries: hours must be >= 1");
    const std::size_t nr = network.regions.size();
    TimeSeriesSet ts;
    ts.timestamps.resize(hours);
    for (std::size_t t = 0; t < hours; ++t)
        ts.timestamps[t] = kSyntheticEpoch + std::int64_t(t) * 3600;

    ts.demand_mw.assign(nr, std::vector<double>(hours, 0.0));
    for (const auto& c : network.carriers) {
        if (c.uses_capacity_factor_series)
            ts.capacity_factor[c.name].assign(nr, std::vector<double>(hours, 0.0));
    }
    ts.hydro_inflow_mwh.assign(nr, std::vector<double>(hours, 0.0));
    ts.hydro_energy_capacity_mwh.assign(nr, 0.0);
    ts.hydro_power_capacity_mw.assign(nr, 0.0);
    for (const auto& h : default_hydro()) {
        int r = network.region_index(h.short_code);
        if (r >= 0) {
            ts.hydro_power_capacity_mw[std::size_t(r)] = h.power_mw;
            ts.hydro_energy_capacity_mwh[std::size_t(r)] = h.energy_mwh;
        }
    }

    for (std::size_t r = 0; r < nr; ++r) {
        const Region& reg = network.regions[r];
        SmoothNoise demand_noise(seed ^ fnv1a64("demand:" + reg.short_code), 8, 96);
        SmoothNoise wind_noise(seed ^ fnv1a64("wind:" + reg.short_code), 6, 120);
        SmoothNoise wind_noise_fast(seed ^ fnv1a64("wind2:" + reg.short_code), 3, 18);
        for (std::size_t t = 0; t < hours; ++t) {
            double td = double(t);
            double daily = std::sin(2.0 * std::numbers::pi * td / 24.0);
            double demand =
                reg.mean_demand_gw * 1000.0 * (1.0 + 0.2 * daily + 0.05 * demand_noise(td));
            ts.demand_mw[r][t] = std::max(0.0, demand);

            double day_of_year = std::fmod(td / 24.0, 365.0);
            double seasonal =
                0.6 - 0.4 * std::cos(2.0 * std::numbers::pi * day_of_year / 365.0);
            double sun = std::max(0.0, std::sin(std::numbers::pi * double(t % 24) / 24.0));
            if (auto it = ts.capacity_factor.find("solar"); it != ts.capacity_factor.end())
                it->second[r][t] = std::clamp(sun * seasonal, 0.0, 1.0);

            double wind = 0.30 + 0.28 * wind_noise(td) + 0.10 * wind_noise_fast(td);
            if (auto it = ts.capacity_factor.find("wind"); it != ts.capacity_factor.end())
                it->second[r][t] = std::clamp(wind, 0.0, 1.0);

            ts.hydro_inflow_mwh[r][t] = 0.3 * ts.hydro_power_capacity_mw[r];
        }
    }
    return ts;
}

namespace {

// Reads a timestamp-by-region matrix file and validates the grid.
struct MatrixFile {
    std::vector<std::int64_t> timestamps;
    std::vector<std::vector<double>> values;  // [region][t]
};

MatrixFile read_matrix(const std::filesystem::path& path, const Network& net, double lo, double hi,
                       const char* quantity) {
    csv::Table t = csv::read_file(path);
    if (t.header.empty() || t.header[0] != "timestamp")
        throw DataError(t.path + ": first column must be 'timestamp'");
    std::vector<int> col_of_region(net.regions.size(), -1);
    std::vector<std::string> missing;
    for (std::size_t r = 0; r < net.regions.size(); ++r) {
        int c = t.column(net.regions[r].short_code);
        if (c < 0)
            missing.push_back(net.regions[r].short_code);
        else
            col_of_region[r] = c;
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw DataError(t.path + ": missing region columns: " + list);
    }
    MatrixFile out;
    out.values.assign(net.regions.size(), std::vector<double>(t.rows.size(), 0.0));
    std::int64_t prev = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::int64_t ts;
        if (!csv::parse_timestamp(t.rows[i][0], ts))
            throw DataError(t.path + ":" + std::to_string(t.line_numbers[i]) +
                            " column timestamp: cannot parse '" + t.rows[i][0] + "'");
        if (i > 0 && ts - prev != 3600)
            throw DataError(t.path + ":" + std::to_string(t.line_numbers[i]) +
                            " column timestamp: grid is not uniform hourly (step " +
                            std::to_string(ts - prev) + " s)");
        prev = ts;
        out.timestamps.push_back(ts);
        for (std::size_t r = 0; r < net.regions.size(); ++r) {
            const std::string& field = t.rows[i][std::size_t(col_of_region[r])];
            double v;
            if (!csv::parse_double(field, v))
                throw DataError(t.path + ":" + std::to_string(t.line_numbers[i]) + " column " +
                                net.regions[r].short_code + ": cannot parse '" + field + "'");
            if (v < lo || v > hi)
                throw DataError(t.path + ":" + std::to_string(t.line_numbers[i]) + " column " +
                                net.regions[r].short_code + ": " + quantity + " " +
                                csv::format_double(v) + " outside [" + csv::format_double(lo) +
                                ", " + csv::format_double(hi) + "]");
            out.values[r][i] = v;
        }
    }
    if (out.timestamps.empty()) throw DataError(t.path + ": no data rows");
    return out;
}

}  // namespace

TimeSeriesSet load_timeseries(const std::filesystem::path& dir, const Network& net) {
    const double inf = std::numeric_limits<double>::infinity();
    MatrixFile demand = read_matrix(dir / "demand.csv", net, 0.0, inf, "demand");

    TimeSeriesSet ts;
    ts.timestamps = demand.timestamps;
    ts.demand_mw = std::move(demand.values);
    const std::size_t T = ts.timestamps.size();

    auto check_aligned = [&](const MatrixFile& m, const std::string& file) {
        if (m.timestamps.size() != T)
            throw DataError(file + ": length " + std::to_string(m.timestamps.size()) +
                            " does not match demand.csv length " + std::to_string(T));
        if (m.timestamps != ts.timestamps)
            throw DataError(file + ": timestamp grid differs from demand.csv");
    };

    for (const auto& c : net.carriers) {
        if (!c.uses_capacity_factor_series) continue;
        std::string file = "capacity_factor_" + c.name + ".csv";
        MatrixFile m = read_matrix(dir / file, net, 0.0, 1.0, "capacity factor");
        check_aligned(m, file);
        ts.capacity_factor[c.name] = std::move(m.values);
    }

    MatrixFile inflow = read_matrix(dir / "inflow.csv", net, 0.0, inf, "inflow");
    check_aligned(inflow, "inflow.csv");
    ts.hydro_inflow_mwh = std::move(inflow.values);

    csv::Table hydro = csv::read_file(dir / "hydro.csv");
    int creg = hydro.column("region"), cpow = hydro.column("power_mw"), cen = hydro.column("energy_mwh");
    if (creg < 0 || cpow < 0 || cen < 0)
        throw DataError(hydro.path + ": header must contain region,power_mw,energy_mwh");
    ts.hydro_power_capacity_mw.assign(net.regions.size(), 0.0);
    ts.hydro_energy_capacity_mwh.assign(net.regions.size(), 0.0);
    for (std::size_t i = 0; i < hydro.rows.size(); ++i) {
        const auto& row = hydro.rows[i];
        int r = net.region_index(row[std::size_t(creg)]);
        if (r < 0)
            throw DataError(hydro.path + ":" + std::to_string(hydro.line_numbers[i]) +
                            " column region: unknown region '" + row[std::size_t(creg)] + "'");
        double p, e;
        if (!csv::parse_double(row[std::size_t(cpow)], p) || p < 0)
            throw DataError(hydro.path + ":" + std::to_string(hydro.line_numbers[i]) +
                            " column power_mw: invalid value");
        if (!csv::parse_double(row[std::size_t(cen)], e) || e < 0)
            throw DataError(hydro.path + ":" + std::to_string(hydro.line_numbers[i]) +
                            " column energy_mwh: invalid value");
        ts.hydro_power_capacity_mw[std::size_t(r)] = p;
        ts.hydro_energy_capacity_mwh[std::size_t(r)] = e;
    }
    return ts;
}

void save_timeseries(const TimeSeriesSet& ts, const Network& net,
                     const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write_matrix = [&](const std::string& file, const std::vector<std::vector<double>>& m) {
        std::string out = "timestamp";
        for (const auto& r : net.regions) out += "," + r.short_code;
        out += "\n";
        for (std::size_t t = 0; t < ts.timestamps.size(); ++t) {
            out += csv::format_timestamp(ts.timestamps[t]);
            for (std::size_t r = 0; r < net.regions.size(); ++r)
                out += "," + csv::format_double(m[r][t]);
            out += "\n";
        }
        csv::write_file_atomic(dir / file, out);
    };
    write_matrix("demand.csv", ts.demand_mw);
    for (const auto& [name, values] : ts.capacity_factor)
        write_matrix("capacity_factor_" + name + ".csv", values);
    write_matrix("inflow.csv", ts.hydro_inflow_mwh);

    std::string hydro = "region,power_mw,energy_mwh\n";
    for (std::size_t r = 0; r < net.regions.size(); ++r) {
        hydro += net.regions[r].short_code + "," +
                 csv::format_double(ts.hydro_power_capacity_mw[r]) + "," +
                 csv::format_double(ts.hydro_energy_capacity_mwh[r]) + "\n";
    }
    csv::write_file_atomic(dir / "hydro.csv", hydro);
}

}  // namespace leakage
