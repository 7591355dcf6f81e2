#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "formulation.hpp"
#include "model.hpp"
#include "pricing.hpp"
#include "solver.hpp"
#include "support/toys.hpp"
#include "support/vertex_oracle.hpp"

using namespace leakage;

namespace {

// Single-region scenario with one fully dispatchable carrier.
ScenarioInputs one_region_scenario(double demand_mw, std::size_t T, double weight_h) {
    Network net;
    net.regions.push_back({0, "Test", "TT", 30000, 1e6, demand_mw / 1000.0});
    CarrierSpec coal;
    coal.name = "coal";
    coal.capital_cost = 145000;
    coal.marginal_cost = 25;
    coal.emission_factor = 1;
    net.carriers.push_back(coal);

    ScenarioInputs in;
    in.network = net;
    in.series.timestamps.resize(T);
    for (std::size_t t = 0; t < T; ++t) in.series.timestamps[t] = std::int64_t(t) * 3600;
    in.series.demand_mw = {std::vector<double>(T, demand_mw)};
    in.series.hydro_inflow_mwh = {std::vector<double>(T, 0.0)};
    in.series.hydro_power_capacity_mw = {0.0};
    in.series.hydro_energy_capacity_mwh = {0.0};
    in.pricing.base_price = 0;
    in.pricing.alpha = 0;
    in.pricing.reference_gdp = 30000;
    in.pricing.effective_price = {0.0};
    in.options.timestep_weight_h = weight_h;
    return in;
}

}  // namespace

TEST_CASE("textbook lp: min x subject to x >= 3") {
    LinearProgram lp;
    int x = lp.add_column("x", 0, std::numeric_limits<double>::infinity(), 1.0);
    int row = lp.add_row("floor", RowSense::GreaterEqual, 3.0);
    lp.add_entry(row, x, 1.0);

    Solution s = solve(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(s.primal_value(lp, "x") == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(s.dual_value(lp, "floor") == doctest::Approx(1.0).epsilon(1e-6));

    VerifyReport r = verify(lp, s);
    CHECK(r.acceptable());
}

TEST_CASE("hand-solved single region coal build-out") {
    // d = 10 MW for one step that stands for a full year: the optimum builds
    // exactly 10 MW and runs it flat out.
    ScenarioInputs in = one_region_scenario(10.0, 1, 8760.0);
    LinearProgram lp = build_lp(in);
    CHECK(lp.num_columns() == 2);

    Solution s = solve(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    double expected = 145000.0 * 10.0 + 25.0 * 10.0 * 8760.0;
    CHECK(s.objective == doctest::Approx(expected).epsilon(1e-7));
    CHECK(s.primal_value(lp, "cap[TT,coal]") == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("degenerate duplicate rows still solve with consistent duals") {
    LinearProgram lp;
    int x = lp.add_column("x", 0, std::numeric_limits<double>::infinity(), 2.0);
    int r1 = lp.add_row("fix_a", RowSense::Equal, 5.0);
    int r2 = lp.add_row("fix_b", RowSense::Equal, 5.0);
    lp.add_entry(r1, x, 1.0);
    lp.add_entry(r2, x, 1.0);

    Solution s = solve(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(10.0).epsilon(1e-7));
    // the dual weight may split across the duplicates but must sum to the cost
    CHECK(s.dual_value(lp, "fix_a") + s.dual_value(lp, "fix_b") ==
          doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("infeasible lp is classified with a hint") {
    LinearProgram lp;
    int x = lp.add_column("x", 0, std::numeric_limits<double>::infinity(), 1.0);
    int lo = lp.add_row("atleast[0]", RowSense::GreaterEqual, 3.0);
    int hi = lp.add_row("atmost[0]", RowSense::LessEqual, 1.0);
    lp.add_entry(lo, x, 1.0);
    lp.add_entry(hi, x, 1.0);

    Solution s = solve(lp);
    CHECK(s.status == SolveStatus::Infeasible);
    CHECK(!s.message.empty());
}

TEST_CASE("unbounded lp is classified") {
    LinearProgram lp;
    int x = lp.add_column("x", 0, std::numeric_limits<double>::infinity(), -1.0);
    int y = lp.add_column("y", 0, std::numeric_limits<double>::infinity(), 0.0);
    int row = lp.add_row("tie", RowSense::Equal, 0.0);
    lp.add_entry(row, x, 1.0);
    lp.add_entry(row, y, -1.0);

    Solution s = solve(lp);
    CHECK(s.status == SolveStatus::Unbounded);
}

TEST_CASE("determinism: repeated solves give identical results") {
    ScenarioInputs in = one_region_scenario(25.0, 4, 1.0);
    LinearProgram lp = build_lp(in);
    Solution a = solve(lp);
    Solution b = solve(lp);
    REQUIRE(a.status == SolveStatus::Optimal);
    CHECK(a.objective == b.objective);
    CHECK(a.primal == b.primal);
    CHECK(a.dual == b.dual);
}

TEST_CASE("verify flags rows broken by a perturbed primal") {
    ScenarioInputs in = one_region_scenario(10.0, 2, 1.0);
    LinearProgram lp = build_lp(in);
    Solution s = solve(lp);
    REQUIRE(s.status == SolveStatus::Optimal);

    Solution broken = s;
    int j = lp.column_index("gen[TT,coal,0]");
    broken.primal[std::size_t(j)] += 1.0;
    VerifyReport r = verify(lp, broken);
    CHECK(r.max_primal_residual >= doctest::Approx(1.0).epsilon(1e-9));
    bool has_balance = false;
    for (const auto& name : r.flagged_rows) has_balance |= name.rfind("bal[", 0) == 0;
    CHECK(has_balance);
}

TEST_CASE("random miniature scenarios match exhaustive vertex enumeration") {
    SplitMix64 rng(31337);
    for (int trial = 0; trial < 8; ++trial) {
        ScenarioInputs in = testsupport::random_tiny_scenario(rng);
        LinearProgram lp = build_lp(in);
        Solution s = solve(lp);
        REQUIRE(s.status == SolveStatus::Optimal);
        auto oracle = testsupport::vertex_enumeration_minimum(lp);
        REQUIRE(oracle.has_value());
        CHECK(std::abs(s.objective - *oracle) <= 1e-6 * (1.0 + std::abs(*oracle)));
    }
}

TEST_CASE("balance duals match finite-difference shadow prices") {
    SplitMix64 rng(777);
    SolveTolerances tight;
    tight.feasibility = 1e-10;
    tight.gap = 1e-10;
    for (int trial = 0; trial < 2; ++trial) {
        ScenarioInputs in = testsupport::random_tiny_scenario(rng);
        LinearProgram lp = build_lp(in);
        Solution base = solve(lp, tight);
        REQUIRE(base.status == SolveStatus::Optimal);

        std::size_t r = rng.next() % in.network.regions.size();
        std::size_t t = rng.next() % in.steps();
        std::string row = names::balance(in.network, r, t);
        double lambda = base.dual_value(lp, row);

        ScenarioInputs bumped = in;
        bumped.series.demand_mw[r][t] += 1.0;
        Solution shifted = solve(build_lp(bumped), tight);
        REQUIRE(shifted.status == SolveStatus::Optimal);
        double diff = shifted.objective - base.objective;
        CHECK(std::abs(diff - lambda) <= 1e-4 * std::max(1.0, std::abs(lambda)));
    }
}

TEST_CASE("zero solution on nonzero demand reports the gap as infeasibility") {
    ScenarioInputs in = one_region_scenario(42.0, 1, 1.0);
    LinearProgram lp = build_lp(in);
    Solution zero;
    zero.status = SolveStatus::Optimal;
    zero.primal.assign(std::size_t(lp.num_columns()), 0.0);
    zero.dual.assign(std::size_t(lp.num_rows()), 0.0);
    VerifyReport r = verify(lp, zero);
    CHECK(r.max_primal_residual == doctest::Approx(42.0));
}
