#include "formulation.hpp"

#include <cmath>
#include <limits>

#include "common.hpp"

namespace leakage {

namespace names {

static std::string idx(std::size_t t) { return std::to_string(t); }

std::string cap(const Network& n, std::size_t r, const std::string& carrier) {
    return "cap[" + n.regions[r].short_code + "," + carrier + "]";
}
std::string gen(const Network& n, std::size_t r, const std::string& carrier, std::size_t t) {
    return "gen[" + n.regions[r].short_code + "," + carrier + "," + idx(t) + "]";
}
std::string store(const Network& n, std::size_t r, const std::string& carrier, std::size_t t) {
    return "store[" + n.regions[r].short_code + "," + carrier + "," + idx(t) + "]";
}
std::string dispatch(const Network& n, std::size_t r, const std::string& carrier, std::size_t t) {
    return "disp[" + n.regions[r].short_code + "," + carrier + "," + idx(t) + "]";
}
std::string soc(const Network& n, std::size_t r, const std::string& carrier, std::size_t t) {
    return "soc[" + n.regions[r].short_code + "," + carrier + "," + idx(t) + "]";
}
std::string spill(const Network& n, std::size_t r, const std::string& carrier, std::size_t t) {
    return "spill[" + n.regions[r].short_code + "," + carrier + "," + idx(t) + "]";
}
std::string flow(const Network& n, std::size_t l, std::size_t t) {
    const Link& link = n.links[l];
    return "flow[" + n.regions[std::size_t(link.from_region)].short_code + "-" +
           n.regions[std::size_t(link.to_region)].short_code + "," + idx(t) + "]";
}
std::string balance(const Network& n, std::size_t r, std::size_t t) {
    return "bal[" + n.regions[r].short_code + "," + idx(t) + "]";
}

}  // namespace names

double effective_marginal_cost(const CarrierSpec& carrier, double region_price) {
    if (region_price < 0) throw DataError("effective_marginal_cost: negative carbon price");
    return carrier.marginal_cost + region_price * carrier.emission_factor;
}

void ScenarioInputs::validate() const {
    network.validate();
    const std::size_t nr = network.regions.size();
    const std::size_t T = series.steps();
    if (T == 0) throw DataError("scenario: time series is empty");
    auto check_matrix = [&](const std::vector<std::vector<double>>& m, const char* what,
                            double lo, double hi) {
        if (m.size() != nr) throw DataError(std::string("scenario: ") + what + " not aligned to regions");
        for (std::size_t r = 0; r < nr; ++r) {
            if (m[r].size() != T)
                throw DataError(std::string("scenario: ") + what + " for region " +
                                network.regions[r].short_code + " has wrong length");
            for (double v : m[r]) {
                if (!std::isfinite(v) || v < lo || v > hi)
                    throw DataError(std::string("scenario: ") + what + " for region " +
                                    network.regions[r].short_code + " out of range");
            }
        }
    };
    const double inf = std::numeric_limits<double>::infinity();
    check_matrix(series.demand_mw, "demand", 0.0, inf);
    check_matrix(series.hydro_inflow_mwh, "inflow", 0.0, inf);
    for (const auto& c : network.carriers) {
        if (!c.uses_capacity_factor_series) continue;
        auto it = series.capacity_factor.find(c.name);
        if (it == series.capacity_factor.end())
            throw DataError("scenario: capacity factor series missing for carrier " + c.name);
        check_matrix(it->second, ("capacity factor " + c.name).c_str(), 0.0, 1.0);
    }
    if (series.hydro_power_capacity_mw.size() != nr || series.hydro_energy_capacity_mwh.size() != nr)
        throw DataError("scenario: hydro capacity vectors not aligned to regions");
    if (pricing.effective_price.size() != nr)
        throw DataError("scenario: pricing not aligned to regions");
    for (double p : pricing.effective_price)
        if (!(p >= 0)) throw DataError("scenario: negative effective carbon price");
    if (!(options.battery_hours > 0)) throw DataError("scenario: battery_hours must be positive");
    if (!(options.timestep_weight_h >= 1)) throw DataError("scenario: timestep weight must be >= 1");

    int reservoirs = 0;
    for (const auto& c : network.carriers) {
        if (c.kind == CarrierKind::Generator && !c.extendable)
            throw DataError("scenario: non-extendable generators are not supported");
        if (c.kind == CarrierKind::Storage && !c.extendable) ++reservoirs;
    }
    if (reservoirs > 1) throw DataError("scenario: at most one fixed-capacity storage carrier");
}

namespace {

struct CarrierLayout {
    // Regions where a fixed-capacity reservoir exists (positive power capacity).
    std::vector<std::size_t> reservoir_regions;
    // Whether each reservoir region has any inflow to spill.
    std::vector<bool> reservoir_has_inflow;
};

CarrierLayout layout(const ScenarioInputs& in) {
    CarrierLayout lay;
    const std::size_t nr = in.network.regions.size();
    for (std::size_t r = 0; r < nr; ++r) {
        if (in.series.hydro_power_capacity_mw[r] > 0) {
            lay.reservoir_regions.push_back(r);
            double total = 0;
            for (double v : in.series.hydro_inflow_mwh[r]) total += v;
            lay.reservoir_has_inflow.push_back(total > 0);
        }
    }
    return lay;
}

}  // namespace

LpCensus census(const ScenarioInputs& in) {
    const std::size_t nr = in.network.regions.size();
    const std::size_t T = in.steps();
    CarrierLayout lay = layout(in);
    const std::size_t hydro_regions = lay.reservoir_regions.size();
    std::size_t hydro_spill_regions = 0;
    for (bool b : lay.reservoir_has_inflow) hydro_spill_regions += b ? 1 : 0;

    LpCensus c;
    c.balance_rows = nr * T;
    c.flow_columns = in.network.links.size() * T;
    for (const auto& carrier : in.network.carriers) {
        if (carrier.kind == CarrierKind::Generator) {
            c.capacity_columns += nr;
            c.dispatch_columns += nr * T;
            if (carrier.uses_capacity_factor_series) {
                // Steps with zero potential are encoded as bounds, not rows.
                const auto& cf = in.series.capacity_factor.at(carrier.name);
                for (std::size_t r = 0; r < nr; ++r)
                    for (std::size_t t = 0; t < T; ++t)
                        if (cf[r][t] > 0) ++c.dispatch_bound_rows;
            } else {
                c.dispatch_bound_rows += nr * T;
            }
        } else if (carrier.extendable) {
            c.capacity_columns += nr;
            c.dispatch_columns += nr * T;             // dispatch
            c.dispatch_bound_rows += nr * T;
            if (carrier.grid_charging) {
                c.dispatch_columns += nr * T;         // store
                c.dispatch_bound_rows += nr * T;
            }
            c.soc_columns += nr * T;
            c.energy_bound_rows += nr * T;
            c.soc_rows += nr * T;
        } else {
            c.dispatch_columns += hydro_regions * T;
            c.soc_columns += hydro_regions * T;
            c.soc_rows += hydro_regions * T;
            c.spill_columns += hydro_spill_regions * T;
        }
    }
    return c;
}

std::string LpCensus::describe() const {
    std::string s;
    s += "rows: " + std::to_string(total_rows()) + " (balance " + std::to_string(balance_rows) +
         ", dispatch bounds " + std::to_string(dispatch_bound_rows) + ", energy bounds " +
         std::to_string(energy_bound_rows) + ", soc " + std::to_string(soc_rows) + ")\n";
    s += "columns: " + std::to_string(total_columns()) + " (capacity " +
         std::to_string(capacity_columns) + ", dispatch " + std::to_string(dispatch_columns) +
         ", soc " + std::to_string(soc_columns) + ", spill " + std::to_string(spill_columns) +
         ", flow " + std::to_string(flow_columns) + ")";
    return s;
}

LinearProgram build_lp(const ScenarioInputs& in) {
    in.validate();
    const Network& net = in.network;
    const std::size_t nr = net.regions.size();
    const std::size_t nl = net.links.size();
    const std::size_t T = in.steps();
    const double inf = std::numeric_limits<double>::infinity();
    const double w = in.options.timestep_weight_h;
    const double marginal_scale = w * in.year_scale();

    LinearProgram lp;

    // Balance rows come first so duals stay easy to scan in solver output.
    std::vector<std::vector<int>> bal(nr, std::vector<int>(T));
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t t = 0; t < T; ++t)
            bal[r][t] = lp.add_row(names::balance(net, r, t), RowSense::Equal,
                                   in.series.demand_mw[r][t]);

    CarrierLayout lay = layout(in);

    for (const auto& carrier : net.carriers) {
        const bool is_storage = carrier.kind == CarrierKind::Storage;
        const double eta0 = carrier.standing_efficiency;
        const double eta1 = carrier.charge_efficiency;
        const double eta2 = carrier.discharge_efficiency;
        const auto* cf = carrier.uses_capacity_factor_series
                             ? &in.series.capacity_factor.at(carrier.name)
                             : nullptr;

        if (!is_storage) {
            for (std::size_t r = 0; r < nr; ++r) {
                double price = in.pricing.effective_price[r];
                double marg = effective_marginal_cost(carrier, price) * marginal_scale;
                int cap = lp.add_column(names::cap(net, r, carrier.name), 0, inf,
                                        carrier.capital_cost);
                for (std::size_t t = 0; t < T; ++t) {
                    double avail = cf ? (*cf)[r][t] : 1.0;
                    // With no potential the dispatch is a plain zero bound, not a row.
                    int g = lp.add_column(names::gen(net, r, carrier.name, t), 0,
                                          avail > 0 ? inf : 0.0, marg);
                    lp.add_entry(bal[r][t], g, 1.0);
                    if (avail > 0) {
                        int row = lp.add_row("gub[" + net.regions[r].short_code + "," +
                                                 carrier.name + "," + std::to_string(t) + "]",
                                             RowSense::LessEqual, 0.0);
                        lp.add_entry(row, g, 1.0);
                        lp.add_entry(row, cap, -avail);
                    }
                }
            }
            continue;
        }

        if (carrier.extendable) {
            const double hours = in.options.battery_hours;
            for (std::size_t r = 0; r < nr; ++r) {
                double price = in.pricing.effective_price[r];
                double marg = effective_marginal_cost(carrier, price) * marginal_scale;
                int cap = lp.add_column(names::cap(net, r, carrier.name), 0, inf,
                                        carrier.capital_cost);
                std::vector<int> disp(T), soc(T);
                std::vector<int> sto(T, -1);
                for (std::size_t t = 0; t < T; ++t) {
                    disp[t] = lp.add_column(names::dispatch(net, r, carrier.name, t), 0, inf, marg);
                    lp.add_entry(bal[r][t], disp[t], 1.0);
                    int drow = lp.add_row("dub[" + net.regions[r].short_code + "," + carrier.name +
                                              "," + std::to_string(t) + "]",
                                          RowSense::LessEqual, 0.0);
                    lp.add_entry(drow, disp[t], 1.0);
                    lp.add_entry(drow, cap, -1.0);
                    if (carrier.grid_charging) {
                        sto[t] = lp.add_column(names::store(net, r, carrier.name, t), 0, inf, 0.0);
                        lp.add_entry(bal[r][t], sto[t], -1.0);
                        int srow = lp.add_row("sub[" + net.regions[r].short_code + "," +
                                                  carrier.name + "," + std::to_string(t) + "]",
                                              RowSense::LessEqual, 0.0);
                        lp.add_entry(srow, sto[t], 1.0);
                        lp.add_entry(srow, cap, -1.0);
                    }
                    soc[t] = lp.add_column(names::soc(net, r, carrier.name, t), 0, inf, 0.0);
                    int erow = lp.add_row("eub[" + net.regions[r].short_code + "," + carrier.name +
                                              "," + std::to_string(t) + "]",
                                          RowSense::LessEqual, 0.0);
                    lp.add_entry(erow, soc[t], 1.0);
                    lp.add_entry(erow, cap, -hours);
                }
                for (std::size_t t = 0; t < T; ++t) {
                    int row = lp.add_row("sbal[" + net.regions[r].short_code + "," + carrier.name +
                                             "," + std::to_string(t) + "]",
                                         RowSense::Equal, 0.0);
                    bool has_prev = in.options.cyclic_storage || t > 0;
                    std::size_t prev = t > 0 ? t - 1 : T - 1;
                    if (has_prev && prev == t) {
                        if (1.0 - eta0 != 0.0) lp.add_entry(row, soc[t], 1.0 - eta0);
                    } else {
                        lp.add_entry(row, soc[t], 1.0);
                        if (has_prev) lp.add_entry(row, soc[prev], -eta0);
                        else lp.add_entry(row, cap, -eta0 * 0.5 * hours);  // SOC_0 = 50%
                    }
                    if (sto[t] >= 0) lp.add_entry(row, sto[t], -eta1 * w);
                    lp.add_entry(row, disp[t], w / eta2);
                }
            }
            continue;
        }

        // Fixed-capacity reservoir storage (hydro).
        for (std::size_t k = 0; k < lay.reservoir_regions.size(); ++k) {
            std::size_t r = lay.reservoir_regions[k];
            double power = in.series.hydro_power_capacity_mw[r];
            double energy = in.series.hydro_energy_capacity_mwh[r];
            double price = in.pricing.effective_price[r];
            double marg = effective_marginal_cost(carrier, price) * marginal_scale;
            std::vector<int> disp(T), soc(T);
            std::vector<int> spill(T, -1);
            for (std::size_t t = 0; t < T; ++t) {
                disp[t] = lp.add_column(names::dispatch(net, r, carrier.name, t), 0, power, marg);
                lp.add_entry(bal[r][t], disp[t], 1.0);
                soc[t] = lp.add_column(names::soc(net, r, carrier.name, t), 0, energy, 0.0);
                if (lay.reservoir_has_inflow[k])
                    spill[t] = lp.add_column(names::spill(net, r, carrier.name, t), 0, inf, 0.0);
            }
            for (std::size_t t = 0; t < T; ++t) {
                double rhs = w * in.series.hydro_inflow_mwh[r][t];
                bool has_prev = in.options.cyclic_storage || t > 0;
                std::size_t prev = t > 0 ? t - 1 : T - 1;
                if (!has_prev) rhs += eta0 * 0.5 * energy;  // SOC_0 = 50%
                int row = lp.add_row("sbal[" + net.regions[r].short_code + "," + carrier.name + "," +
                                         std::to_string(t) + "]",
                                     RowSense::Equal, rhs);
                if (has_prev && prev == t) {
                    if (1.0 - eta0 != 0.0) lp.add_entry(row, soc[t], 1.0 - eta0);
                } else {
                    lp.add_entry(row, soc[t], 1.0);
                    if (has_prev) lp.add_entry(row, soc[prev], -eta0);
                }
                lp.add_entry(row, disp[t], w / eta2);
                if (spill[t] >= 0) lp.add_entry(row, spill[t], w);
            }
        }
    }

    for (std::size_t l = 0; l < nl; ++l) {
        const Link& link = net.links[l];
        for (std::size_t t = 0; t < T; ++t) {
            int f = lp.add_column(names::flow(net, l, t), -link.capacity_mw, link.capacity_mw, 0.0);
            lp.add_entry(bal[std::size_t(link.from_region)][t], f, -1.0);
            lp.add_entry(bal[std::size_t(link.to_region)][t], f, 1.0);
        }
    }

    LpCensus expect = census(in);
    if (std::size_t(lp.num_rows()) != expect.total_rows() ||
        std::size_t(lp.num_columns()) != expect.total_columns())
        throw SolverError("formulation: emitted LP does not match census");
    lp.validate();
    return lp;
}

}  // namespace leakage
