#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "pricing.hpp"
#include "solver.hpp"
#include "support/toys.hpp"

using namespace leakage;
using testsupport::make_toy;
using testsupport::ToySpec;

TEST_CASE("autarkic region earns nothing and pays nothing extra") {
    ToySpec spec;
    spec.demand_mw = {10};
    spec.weight_h = 8760;
    spec.annualize = true;
    ScenarioInputs in = make_toy(spec);
    LinearProgram lp = build_lp(in);
    Solution sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);

    CostReport rep = cost_report(in, lp, sol);
    const RegionCost& rc = rep.regions[0];
    CHECK(rc.system_cost == doctest::Approx(sol.objective).epsilon(1e-9));
    CHECK(rc.consumer_cost == doctest::Approx(rc.system_cost).epsilon(1e-6));
    CHECK(std::abs(rc.net_profit) <= 1e-6 * rc.system_cost);
    CHECK(std::abs(rc.producer_profit) <= 1e-6 * rc.system_cost);
    CHECK(rc.net_import_mwh == doctest::Approx(0.0));
    CHECK(rep.links.empty());
    CHECK(rep.closure_residual <= 1e-6);
    // consumer LCOE of a flat coal system: capital / 8760 + marginal
    CHECK(rc.consumer_lcoe == doctest::Approx(145000.0 / 8760.0 + 25.0).epsilon(1e-6));
}

TEST_CASE("uncongested links equalise prices; congested links earn rent") {
    SUBCASE("wide link") {
        ToySpec spec;
        spec.demand_mw = {10, 10};
        spec.carriers = {"coal"};
        spec.chain_link_capacity_mw = 1000;
        spec.carbon_price = {0, 1000};  // generation concentrates in A
        ScenarioInputs in = make_toy(spec);
        LinearProgram lp = build_lp(in);
        Solution sol = solve(lp);
        REQUIRE(sol.status == SolveStatus::Optimal);
        double la = sol.dual_value(lp, "bal[AT,0]");
        double lb = sol.dual_value(lp, "bal[BT,0]");
        CHECK(la == doctest::Approx(lb).epsilon(1e-5));
        CostReport rep = cost_report(in, lp, sol);
        CHECK(std::abs(rep.links[0].congestion_rent) <= 1e-4 * rep.total_system_cost);
        CHECK(rep.closure_residual <= 1e-6);
    }

    SUBCASE("binding link earns the price spread, twice derived") {
        ToySpec spec;
        spec.demand_mw = {10, 10};
        spec.carriers = {"coal"};
        spec.chain_link_capacity_mw = 4;  // importer must also build locally
        spec.carbon_price = {0, 1000};
        ScenarioInputs in = make_toy(spec);
        LinearProgram lp = build_lp(in);
        Solution sol = solve(lp);
        REQUIRE(sol.status == SolveStatus::Optimal);

        double la = sol.dual_value(lp, "bal[AT,0]");
        double lb = sol.dual_value(lp, "bal[BT,0]");
        CHECK(lb > la);

        CostReport rep = cost_report(in, lp, sol);
        double rent_from_prices = (lb - la) * 4.0;
        CHECK(rep.links[0].congestion_rent ==
              doctest::Approx(rent_from_prices).epsilon(1e-6));

        // the same rent from the flow bound's reduced cost
        int fj = lp.column_index("flow[AT-BT,0]");
        REQUIRE(fj >= 0);
        double reduced = sol.reduced_cost[std::size_t(fj)];
        CHECK(-reduced * 4.0 == doctest::Approx(rent_from_prices).epsilon(1e-4));
        CHECK(rep.closure_residual <= 1e-6);
    }
}

TEST_CASE("cost accounting closes by duality on the full network") {
    ScenarioInputs in;
    in.network = default_network();
    in.series = synthetic_timeseries(in.network, 24, 11);
    in.pricing = make_pricing(in.network, 80, 2.0);
    LinearProgram lp = build_lp(in);
    Solution sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);

    CostReport rep = cost_report(in, lp, sol);
    CHECK(rep.closure_residual <= 1e-6);
    CHECK(rep.total_system_cost == doctest::Approx(sol.objective).epsilon(1e-9));

    // energy balance: lossless links conserve produced minus consumed energy
    SystemSummary sum = system_summary(in, lp, sol);
    double produced = 0;
    for (std::size_t i = 0; i < sum.carrier.size(); ++i) produced += sum.generation_mwh[i];
    double consumed = sum.total_demand_mwh;
    // battery charging recycles; difference is storage losses plus spill
    CHECK(produced >= consumed * (1.0 - 1e-6));
    CHECK(sum.conventional_share >= 0.0);
    CHECK(sum.conventional_share <= 1.0);
}

TEST_CASE("zero demand produces empty aggregates") {
    ToySpec spec;
    spec.demand_mw = {0, 0};
    spec.steps = 2;
    spec.carriers = {"coal", "wind"};
    spec.chain_link_capacity_mw = 10;
    ScenarioInputs in = make_toy(spec);
    LinearProgram lp = build_lp(in);
    Solution sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    SystemSummary sum = system_summary(in, lp, sol);
    for (double v : sum.capacity_mw) CHECK(std::abs(v) <= 1e-5);
    for (double v : sum.generation_mwh) CHECK(std::abs(v) <= 1e-4);
    CHECK(sum.total_demand_mwh == 0.0);
}

TEST_CASE("excluding the conventional carriers forces a zero share") {
    ToySpec spec;
    spec.demand_mw = {10, 10};
    spec.steps = 4;
    spec.carriers = {"wind", "battery"};
    spec.wind_capacity_factor = 0.7;
    spec.chain_link_capacity_mw = 100;
    ScenarioInputs in = make_toy(spec);
    LinearProgram lp = build_lp(in);
    Solution sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    SystemSummary sum = system_summary(in, lp, sol);
    CHECK(sum.conventional_share == 0.0);
}

TEST_CASE("reports require duals") {
    ToySpec spec;
    spec.demand_mw = {10};
    ScenarioInputs in = make_toy(spec);
    LinearProgram lp = build_lp(in);
    Solution sol = solve(lp);
    sol.dual.clear();
    CHECK_THROWS_AS(cost_report(in, lp, sol), DataError);
}

TEST_CASE("csv renderers cover every region and link") {
    ScenarioInputs in;
    in.network = default_network();
    in.series = synthetic_timeseries(in.network, 6, 3);
    in.pricing = make_pricing(in.network, 40, 1.0);
    LinearProgram lp = build_lp(in);
    Solution sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CostReport rep = cost_report(in, lp, sol);

    std::string regions = report_csv(in.network, rep);
    std::string links = links_csv(in.network, rep);
    for (const auto& r : in.network.regions)
        CHECK(regions.find("\n" + r.short_code + ",") != std::string::npos);
    CHECK(links.find("IB-FR,") != std::string::npos);
    CHECK(std::count(links.begin(), links.end(), '\n') == 22);  // header + 21 links
}
