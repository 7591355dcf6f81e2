#include "tracing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace leakage {

namespace {

double snapshot_scale(const FlowSnapshot& s) {
    double scale = 1.0;
    for (double v : s.production_mw) scale = std::max(scale, std::abs(v));
    for (double v : s.consumption_mw) scale = std::max(scale, std::abs(v));
    for (double v : s.link_flow_mw) scale = std::max(scale, std::abs(v));
    return scale;
}

}  // namespace

void FlowSnapshot::check(const Network& net) const {
    const std::size_t nr = net.regions.size();
    if (injection_mw.size() != nr || withdrawal_mw.size() != nr || production_mw.size() != nr ||
        consumption_mw.size() != nr || link_flow_mw.size() != net.links.size())
        throw DataError("snapshot: vectors not aligned to the network");
    const double tol = 1e-6 * snapshot_scale(*this);
    double total = 0;
    for (std::size_t r = 0; r < nr; ++r) {
        double net_balance = production_mw[r] - consumption_mw[r];
        double exports = 0;
        for (std::size_t l = 0; l < net.links.size(); ++l)
            exports += net.incidence(int(r), int(l)) * link_flow_mw[l];
        if (std::abs(net_balance - exports) > tol)
            throw DataError("snapshot: nodal balance violated at " + net.regions[r].short_code +
                            " by " + std::to_string(net_balance - exports));
        if (std::abs((injection_mw[r] - withdrawal_mw[r]) - net_balance) > tol)
            throw DataError("snapshot: net injection inconsistent at " + net.regions[r].short_code);
        total += net_balance;
    }
    if (std::abs(total) > tol)
        throw DataError("snapshot: total production and consumption differ by " +
                        std::to_string(total));
}

FlowSnapshot snapshot_from_solution(const ScenarioInputs& in, const LinearProgram& lp,
                                    const Solution& sol, std::size_t t) {
    if (sol.status != SolveStatus::Optimal)
        throw DataError("snapshot: solution is not optimal");
    const Network& net = in.network;
    const std::size_t nr = net.regions.size();
    const std::size_t ns = net.carriers.size();

    FlowSnapshot s;
    s.t = t;
    s.injection_mw.assign(nr, 0.0);
    s.withdrawal_mw.assign(nr, 0.0);
    s.production_mw.assign(nr, 0.0);
    s.consumption_mw.assign(nr, 0.0);
    s.production_by_carrier.assign(ns, std::vector<double>(nr, 0.0));
    s.link_flow_mw.assign(net.links.size(), 0.0);

    auto value = [&](const std::string& name) {
        int j = lp.column_index(name);
        return j < 0 ? 0.0 : sol.primal[std::size_t(j)];
    };

    for (std::size_t si = 0; si < ns; ++si) {
        const CarrierSpec& carrier = net.carriers[si];
        for (std::size_t r = 0; r < nr; ++r) {
            double produced = 0, stored = 0;
            if (carrier.kind == CarrierKind::Generator) {
                produced = value(names::gen(net, r, carrier.name, t));
            } else {
                produced = value(names::dispatch(net, r, carrier.name, t));
                if (carrier.grid_charging) stored = value(names::store(net, r, carrier.name, t));
            }
            s.production_by_carrier[si][r] = produced;
            s.production_mw[r] += produced;
            s.consumption_mw[r] += stored;
        }
    }
    for (std::size_t r = 0; r < nr; ++r) {
        s.consumption_mw[r] += in.series.demand_mw[r][t];
        double net_balance = s.production_mw[r] - s.consumption_mw[r];
        s.injection_mw[r] = std::max(0.0, net_balance);
        s.withdrawal_mw[r] = std::max(0.0, -net_balance);
    }
    for (std::size_t l = 0; l < net.links.size(); ++l)
        s.link_flow_mw[l] = value(names::flow(net, l, t));

    s.check(net);
    return s;
}

TracedStep average_participation(const FlowSnapshot& s, const Network& net) {
    s.check(net);
    const std::size_t nr = net.regions.size();
    const double scale = snapshot_scale(s);
    const double drop_tol = 1e-9 * scale;

    // directed flows above the drop tolerance
    struct DirFlow {
        std::size_t from, to;
        double mw;
    };
    std::vector<DirFlow> flows;
    for (std::size_t l = 0; l < net.links.size(); ++l) {
        double f = s.link_flow_mw[l];
        if (std::abs(f) <= drop_tol) continue;
        const Link& link = net.links[l];
        if (f > 0) flows.push_back({std::size_t(link.from_region), std::size_t(link.to_region), f});
        else flows.push_back({std::size_t(link.to_region), std::size_t(link.from_region), -f});
    }

    // throughput = net injection + incoming flows; inactive nodes are removed
    std::vector<double> throughput(nr, 0.0);
    for (std::size_t r = 0; r < nr; ++r) throughput[r] = s.injection_mw[r];
    for (const auto& f : flows) throughput[f.to] += f.mw;

    std::vector<int> compact(nr, -1);
    std::vector<std::size_t> active;
    for (std::size_t r = 0; r < nr; ++r) {
        if (throughput[r] > drop_tol) {
            compact[r] = int(active.size());
            active.push_back(r);
        }
    }

    TracedStep out;
    out.allocation.assign(nr, std::vector<double>(nr, 0.0));
    out.node_mix.assign(nr, std::vector<double>(nr, 0.0));

    const int na = int(active.size());
    if (na > 0) {
        // M = diag(p+) + K^- diag(f) K^T restricted to active nodes
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(na, na);
        for (int i = 0; i < na; ++i) M(i, i) = throughput[active[std::size_t(i)]];
        for (const auto& f : flows) {
            int a = compact[f.from], b = compact[f.to];
            if (a < 0 || b < 0)
                throw DataError("allocation: flow touches a node with no throughput");
            M(b, a) -= f.mw;
        }

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
        // singularity = a circulation no withdrawal ever drains
        double dmin = std::numeric_limits<double>::infinity(), dmax = 0;
        for (int i = 0; i < na; ++i) {
            double d = std::abs(lu.matrixLU()(i, i));
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        if (!(dmin > dmax * 1e-13))
            throw DataError("allocation: injection matrix is singular "
                            "(circular flow without withdrawals)");

        for (std::size_t m = 0; m < nr; ++m) {
            if (s.injection_mw[m] <= drop_tol || compact[m] < 0) continue;
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(na);
            rhs[compact[m]] = s.injection_mw[m];
            Eigen::VectorXd q = lu.solve(rhs);
            for (int i = 0; i < na; ++i) {
                double share = q[i];
                if (share < -1e-9)
                    throw DataError("allocation: negative share " + std::to_string(share));
                share = std::max(0.0, share);
                std::size_t n = active[std::size_t(i)];
                out.node_mix[n][m] = share;
                out.allocation[m][n] += share * s.withdrawal_mw[n];
            }
        }
    }

    // local self-supply stays at the node
    for (std::size_t r = 0; r < nr; ++r) {
        double self = std::min(s.production_mw[r], s.consumption_mw[r]);
        if (self > 0) out.allocation[r][r] += self;
        // a node consuming only its own production is its own mix
        if (compact[r] < 0 && self > 0) out.node_mix[r][r] = 1.0;
    }
    return out;
}

AllocationResult allocate_co2(const ScenarioInputs& in, const LinearProgram& lp,
                              const Solution& sol) {
    const Network& net = in.network;
    const std::size_t nr = net.regions.size();
    const std::size_t ns = net.carriers.size();
    const std::size_t T = in.steps();
    const double w = in.step_hours();

    AllocationResult res;
    res.co2_by_sink_t.assign(nr, 0.0);
    res.co2_by_link_t.assign(ns, std::vector<double>(net.links.size(), 0.0));

    const double transfer_floor = 1e-9;

    for (std::size_t t = 0; t < T; ++t) {
        FlowSnapshot snap = snapshot_from_solution(in, lp, sol, t);
        TracedStep traced = average_participation(snap, net);

        // carrier shares of each source's gross production
        std::vector<std::vector<double>> share(nr, std::vector<double>(ns, 0.0));
        std::vector<double> emission_rate(nr, 0.0);  // t per MWh of the node's mix
        for (std::size_t r = 0; r < nr; ++r) {
            if (snap.production_mw[r] <= 0) continue;
            for (std::size_t si = 0; si < ns; ++si) {
                share[r][si] = snap.production_by_carrier[si][r] / snap.production_mw[r];
                emission_rate[r] += share[r][si] * net.carriers[si].emission_factor;
            }
        }

        for (std::size_t m = 0; m < nr; ++m) {
            for (std::size_t n = 0; n < nr; ++n) {
                double mw = traced.allocation[m][n];
                if (mw <= 0) continue;
                res.co2_by_sink_t[n] += mw * w * emission_rate[m];
                for (std::size_t si = 0; si < ns; ++si) {
                    double mwh = mw * w * share[m][si];
                    if (mwh > transfer_floor)
                        res.transfers.push_back({t, int(m), int(n), int(si), mwh});
                }
            }
        }

        // gross carbon moved across each link, split by originating carrier
        for (std::size_t l = 0; l < net.links.size(); ++l) {
            double f = snap.link_flow_mw[l];
            if (f == 0) continue;
            std::size_t tail = f > 0 ? std::size_t(net.links[l].from_region)
                                     : std::size_t(net.links[l].to_region);
            double mag = std::abs(f);
            for (std::size_t m = 0; m < nr; ++m) {
                double mix = traced.node_mix[tail][m];
                if (mix <= 0) continue;
                for (std::size_t si = 0; si < ns; ++si) {
                    double e = net.carriers[si].emission_factor;
                    if (e <= 0) continue;
                    res.co2_by_link_t[si][l] += mag * mix * share[m][si] * e * w;
                }
            }
        }

        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t si = 0; si < ns; ++si)
                res.co2_total_t +=
                    snap.production_by_carrier[si][r] * net.carriers[si].emission_factor * w;
    }

    double sink_total = 0;
    for (double v : res.co2_by_sink_t) sink_total += v;
    if (std::abs(sink_total - res.co2_total_t) > 1e-6 * std::max(1.0, res.co2_total_t))
        throw DataError("allocation: emission conservation violated: sinks " +
                        std::to_string(sink_total) + " vs sources " +
                        std::to_string(res.co2_total_t));
    return res;
}

}  // namespace leakage
