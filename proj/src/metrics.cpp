#include "metrics.hpp"

#include <cmath>

#include "common.hpp"
#include "csv.hpp"

namespace leakage {

CostReport cost_report(const ScenarioInputs& in, const LinearProgram& lp, const Solution& sol) {
    if (sol.status != SolveStatus::Optimal)
        throw DataError("cost report: solution is not optimal");
    if (sol.dual.size() != std::size_t(lp.num_rows()))
        throw DataError("cost report: solution carries no duals");

    const Network& net = in.network;
    const std::size_t nr = net.regions.size();
    const std::size_t T = in.steps();
    const double w = in.step_hours();
    const double ys = in.year_scale();
    const double energy_scale = w * ys;  // MW per step -> MWh per annum

    CostReport rep;
    rep.regions.assign(nr, RegionCost{});
    rep.links.assign(net.links.size(), LinkCost{});

    auto primal = [&](const std::string& name) {
        int j = lp.column_index(name);
        return j < 0 ? 0.0 : sol.primal[std::size_t(j)];
    };

    // nodal prices
    std::vector<std::vector<double>> price(nr, std::vector<double>(T, 0.0));
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t t = 0; t < T; ++t)
            price[r][t] = sol.dual[std::size_t(lp.row_index(names::balance(net, r, t)))];

    for (std::size_t r = 0; r < nr; ++r) {
        RegionCost& rc = rep.regions[r];
        double carbon_price = in.pricing.effective_price[r];

        for (const auto& carrier : net.carriers) {
            bool storage = carrier.kind == CarrierKind::Storage;
            double cap = 0;
            if (carrier.extendable) {
                cap = primal(names::cap(net, r, carrier.name));
                rc.capital_cost += carrier.capital_cost * cap;
            }
            double marg = effective_marginal_cost(carrier, carbon_price);
            double carbon_part = carbon_price * carrier.emission_factor;
            double revenue = 0, production_cost = 0;
            for (std::size_t t = 0; t < T; ++t) {
                double netprod;
                if (!storage) {
                    netprod = primal(names::gen(net, r, carrier.name, t));
                    rc.marginal_cost += marg * netprod * energy_scale;
                    rc.carbon_payment += carbon_part * netprod * energy_scale;
                    production_cost += marg * netprod * energy_scale;
                } else {
                    double disp = primal(names::dispatch(net, r, carrier.name, t));
                    double sto =
                        carrier.grid_charging ? primal(names::store(net, r, carrier.name, t)) : 0.0;
                    netprod = disp - sto;
                    rc.marginal_cost += marg * disp * energy_scale;
                    rc.carbon_payment += carbon_part * disp * energy_scale;
                    production_cost += marg * disp * energy_scale;
                }
                revenue += price[r][t] * netprod;
            }
            if (carrier.extendable) production_cost += carrier.capital_cost * cap;
            rc.producer_profit += revenue - production_cost;
        }

        for (std::size_t t = 0; t < T; ++t) {
            double d = in.series.demand_mw[r][t];
            rc.consumer_cost += price[r][t] * d;
            rc.demand_mwh += d * energy_scale;
        }
        rc.system_cost = rc.capital_cost + rc.marginal_cost;
        rc.net_profit = rc.consumer_cost - rc.system_cost;
        rc.consumer_lcoe = rc.demand_mwh > 0 ? rc.consumer_cost / rc.demand_mwh : 0.0;

        for (std::size_t l = 0; l < net.links.size(); ++l) {
            double k = net.incidence(int(r), int(l));
            if (k == 0.0) continue;
            for (std::size_t t = 0; t < T; ++t)
                rc.net_import_mwh -= k * primal(names::flow(net, l, t)) * energy_scale;
        }
    }

    for (std::size_t l = 0; l < net.links.size(); ++l) {
        const Link& link = net.links[l];
        LinkCost& lc = rep.links[l];
        for (std::size_t t = 0; t < T; ++t) {
            double f = primal(names::flow(net, l, t));
            double spread = price[std::size_t(link.to_region)][t] -
                            price[std::size_t(link.from_region)][t];
            lc.congestion_rent += spread * f;
            lc.traffic_mwh += std::abs(f) * energy_scale;
        }
        rep.total_congestion_rent += lc.congestion_rent;
    }

    for (const auto& rc : rep.regions) {
        rep.total_system_cost += rc.system_cost;
        rep.total_consumer_cost += rc.consumer_cost;
        rep.total_producer_profit += rc.producer_profit;
        rep.total_demand_mwh += rc.demand_mwh;
    }
    rep.total_lcoe = rep.total_demand_mwh > 0 ? rep.total_system_cost / rep.total_demand_mwh : 0.0;

    // By duality every consumer payment ends up as producer cost, producer
    // scarcity rent or congestion rent.
    double closure = rep.total_consumer_cost - rep.total_system_cost - rep.total_congestion_rent -
                     rep.total_producer_profit;
    rep.closure_residual = std::abs(closure) / std::max(1.0, rep.total_system_cost);
    return rep;
}

SystemSummary system_summary(const ScenarioInputs& in, const LinearProgram& lp,
                             const Solution& sol) {
    if (sol.status != SolveStatus::Optimal)
        throw DataError("system summary: solution is not optimal");
    const Network& net = in.network;
    const std::size_t nr = net.regions.size();
    const std::size_t T = in.steps();
    const double energy_scale = in.step_hours() * in.year_scale();

    auto primal = [&](const std::string& name) {
        int j = lp.column_index(name);
        return j < 0 ? 0.0 : sol.primal[std::size_t(j)];
    };

    SystemSummary s;
    s.objective = sol.objective;
    double conventional = 0, primary = 0;
    for (const auto& carrier : net.carriers) {
        double cap = 0, gen = 0, exchange = 0;
        for (std::size_t r = 0; r < nr; ++r) {
            if (carrier.kind == CarrierKind::Generator) {
                cap += primal(names::cap(net, r, carrier.name));
                for (std::size_t t = 0; t < T; ++t)
                    gen += primal(names::gen(net, r, carrier.name, t));
            } else {
                if (carrier.extendable) cap += primal(names::cap(net, r, carrier.name));
                else cap += in.series.hydro_power_capacity_mw[r];
                for (std::size_t t = 0; t < T; ++t) {
                    double disp = primal(names::dispatch(net, r, carrier.name, t));
                    gen += disp;
                    exchange += disp;
                    if (carrier.grid_charging)
                        exchange += primal(names::store(net, r, carrier.name, t));
                }
            }
        }
        gen *= energy_scale;
        s.carrier.push_back(carrier.name);
        s.capacity_mw.push_back(cap);
        s.generation_mwh.push_back(gen);
        if (carrier.kind == CarrierKind::Storage && carrier.extendable)
            s.battery_exchange_mwh += exchange * energy_scale;
        // storage discharge recycles energy that was generated elsewhere,
        // except reservoirs which turn inflow into primary supply
        bool is_primary = carrier.kind == CarrierKind::Generator ||
                          (carrier.kind == CarrierKind::Storage && !carrier.grid_charging);
        if (is_primary) primary += gen;
        if (carrier.emission_factor > 0) conventional += gen;
        for (std::size_t r = 0; r < nr; ++r) {
            if (carrier.kind == CarrierKind::Generator)
                for (std::size_t t = 0; t < T; ++t)
                    s.co2_total_t += primal(names::gen(net, r, carrier.name, t)) *
                                     carrier.emission_factor * energy_scale;
        }
    }
    s.conventional_share = primary > 0 ? conventional / primary : 0.0;

    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t t = 0; t < T; ++t)
            s.total_demand_mwh += in.series.demand_mw[r][t] * energy_scale;

    double total_cost = 0;
    for (std::size_t j = 0; j < std::size_t(lp.num_columns()); ++j)
        total_cost += lp.objective()[j] * sol.primal[j];
    s.total_lcoe = s.total_demand_mwh > 0 ? total_cost / s.total_demand_mwh : 0.0;
    return s;
}

std::string report_csv(const Network& net, const CostReport& rep) {
    std::string s =
        "region,system_cost_mu,capital_cost_mu,marginal_cost_mu,carbon_payment_mu,"
        "consumer_cost_mu,consumer_lcoe_mu_per_mwh,net_profit_mu,producer_profit_mu,"
        "net_import_mwh,demand_mwh\n";
    for (std::size_t r = 0; r < net.regions.size(); ++r) {
        const RegionCost& rc = rep.regions[r];
        s += net.regions[r].short_code;
        for (double v : {rc.system_cost, rc.capital_cost, rc.marginal_cost, rc.carbon_payment,
                         rc.consumer_cost, rc.consumer_lcoe, rc.net_profit, rc.producer_profit,
                         rc.net_import_mwh, rc.demand_mwh})
            s += "," + csv::format_double(v);
        s += "\n";
    }
    return s;
}

std::string links_csv(const Network& net, const CostReport& rep) {
    std::string s = "link,congestion_rent_mu,traffic_mwh\n";
    for (std::size_t l = 0; l < net.links.size(); ++l) {
        const Link& link = net.links[l];
        s += net.regions[std::size_t(link.from_region)].short_code + "-" +
             net.regions[std::size_t(link.to_region)].short_code;
        s += "," + csv::format_double(rep.links[l].congestion_rent);
        s += "," + csv::format_double(rep.links[l].traffic_mwh);
        s += "\n";
    }
    return s;
}

}  // namespace leakage
