#include <doctest.h>

#include "common.hpp"
#include "formulation.hpp"
#include "model.hpp"
#include "pricing.hpp"
#include "solver.hpp"
#include "support/toys.hpp"

using namespace leakage;
using testsupport::ToySpec;
using testsupport::make_toy;

TEST_CASE("carbon prices fold into marginal cost") {
    Network net = default_network();
    CHECK(effective_marginal_cost(*net.carrier("coal"), 80.0) == doctest::Approx(105.0));
    CHECK(effective_marginal_cost(*net.carrier("gas"), 0.0) == doctest::Approx(58.385));
    for (double price : {0.0, 10.0, 400.0})
        CHECK(effective_marginal_cost(*net.carrier("wind"), price) == doctest::Approx(0.01));
}

TEST_CASE("census: single region, one conventional carrier, one step") {
    ToySpec spec;
    spec.demand_mw = {10};
    ScenarioInputs in = make_toy(spec);
    LpCensus c = census(in);
    CHECK(c.total_columns() == 2);  // capacity + dispatch
    CHECK(c.balance_rows == 1);
    CHECK(c.total_rows() == 2);  // balance + dispatch bound

    LinearProgram lp = build_lp(in);
    CHECK(std::size_t(lp.num_columns()) == c.total_columns());
    CHECK(std::size_t(lp.num_rows()) == c.total_rows());
}

TEST_CASE("census matches the emitted program for the full network") {
    ScenarioInputs in;
    in.network = default_network();
    in.series = synthetic_timeseries(in.network, 168, 7);
    in.pricing = make_pricing(in.network, 80, 1.0);

    LpCensus c = census(in);
    CHECK(c.balance_rows == 11 * 168);

    LinearProgram lp = build_lp(in);
    CHECK(std::size_t(lp.num_rows()) == c.total_rows());
    CHECK(std::size_t(lp.num_columns()) == c.total_columns());

    std::size_t balance_rows = 0;
    for (int i = 0; i < lp.num_rows(); ++i)
        if (lp.row_name(i).rfind("bal[", 0) == 0) ++balance_rows;
    CHECK(balance_rows == c.balance_rows);
}

TEST_CASE("marginal coefficients carry the step weight") {
    // a full year in one region: weight w multiplies the per-MWh cost and the
    // annualisation factor collapses to 1
    ToySpec spec;
    spec.demand_mw = {10};
    spec.steps = 2190;
    spec.weight_h = 4.0;
    spec.annualize = true;
    ScenarioInputs in = make_toy(spec);
    CHECK(in.year_scale() == doctest::Approx(1.0));
    LinearProgram lp = build_lp(in);
    int j = lp.column_index("gen[AT,coal,0]");
    REQUIRE(j >= 0);
    CHECK(lp.objective()[std::size_t(j)] == doctest::Approx(25.0 * 4.0));

    // sampling a sub-year scales per-MWh terms up to annual magnitudes
    ToySpec sub = spec;
    sub.steps = 10;
    ScenarioInputs in2 = make_toy(sub);
    LinearProgram lp2 = build_lp(in2);
    int j2 = lp2.column_index("gen[AT,coal,0]");
    CHECK(lp2.objective()[std::size_t(j2)] ==
          doctest::Approx(25.0 * 4.0 * 8760.0 / (10.0 * 4.0)));
}

TEST_CASE("every valid scenario is feasible and zero demand costs nothing") {
    ToySpec spec;
    spec.demand_mw = {0, 0};
    spec.steps = 3;
    spec.carriers = {"coal", "gas", "wind", "battery"};
    spec.chain_link_capacity_mw = 100;
    ScenarioInputs in = make_toy(spec);
    Solution s = solve(build_lp(in));
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective) <= 1e-4);
}

TEST_CASE("removing all links decomposes into single-region problems") {
    ToySpec joint;
    joint.demand_mw = {40, 15};
    joint.steps = 2;
    joint.carriers = {"coal", "gas"};
    joint.carbon_price = {120, 0};
    ScenarioInputs in = make_toy(joint);  // no links configured

    Solution both = solve(build_lp(in));
    REQUIRE(both.status == SolveStatus::Optimal);

    double parts = 0;
    for (std::size_t r = 0; r < 2; ++r) {
        ToySpec single = joint;
        single.demand_mw = {joint.demand_mw[r]};
        single.carbon_price = {joint.carbon_price[r]};
        Solution s = solve(build_lp(make_toy(single)));
        REQUIRE(s.status == SolveStatus::Optimal);
        parts += s.objective;
    }
    CHECK(both.objective == doctest::Approx(parts).epsilon(1e-6));
}

TEST_CASE("objective is monotone in the base price at fixed alpha") {
    double previous = -1;
    for (double mu : {0.0, 30.0, 80.0, 200.0}) {
        ToySpec spec;
        spec.demand_mw = {50, 20};
        spec.steps = 4;
        spec.carriers = {"coal", "gas", "wind"};
        spec.chain_link_capacity_mw = 30;
        spec.carbon_price = {mu, mu};  // alpha = 0
        Solution s = solve(build_lp(make_toy(spec)));
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(s.objective >= previous - 1e-6 * std::abs(s.objective));
        previous = s.objective;
    }
}

TEST_CASE("misaligned inputs are rejected") {
    ToySpec spec;
    spec.demand_mw = {10};
    ScenarioInputs in = make_toy(spec);
    in.series.demand_mw[0].push_back(5);  // length mismatch
    CHECK_THROWS_AS(in.validate(), DataError);

    ScenarioInputs in2 = make_toy(spec);
    in2.pricing.effective_price.clear();
    CHECK_THROWS_AS(build_lp(in2), DataError);

    ScenarioInputs in3 = make_toy(spec);
    in3.series.timestamps.clear();
    in3.series.demand_mw[0].clear();
    in3.series.hydro_inflow_mwh[0].clear();
    CHECK_THROWS_AS(build_lp(in3), DataError);
}
