#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "model.hpp"
#include "pricing.hpp"

using namespace leakage;

namespace {

// Independent reference: the published per-region GDP and mean demand,
// re-entered here and accumulated in extended precision.
struct RefRow {
    const char* code;
    double gdp;
    double demand_gw;
};
constexpr RefRow kReference[11] = {
    {"SC", 60149, 45.4}, {"GB", 44869, 42.1}, {"BE", 51745, 23.8}, {"FR", 41463, 54.3},
    {"IB", 29193, 34.8}, {"IT", 34318, 36.8}, {"AL", 66877, 15.0}, {"DE", 48195, 59.1},
    {"BC", 15998, 21.6}, {"EA", 15494, 26.2}, {"BK", 12842, 17.5},
};

long double reference_weighted_gdp() {
    long double num = 0, den = 0;
    for (const auto& row : kReference) {
        num += (long double)(row.gdp) * (long double)(row.demand_gw);
        den += (long double)(row.demand_gw);
    }
    return num / den;
}

}  // namespace

TEST_CASE("demand-weighted gdp matches the independent oracle") {
    Network net = default_network();
    double got = demand_weighted_gdp(net.regions);
    long double want = reference_weighted_gdp();
    CHECK(std::abs(got - double(want)) <= 1e-9 * double(want));
    CHECK(got == doctest::Approx(40386.0).epsilon(2e-5));  // published rounding
}

TEST_CASE("weighted gdp of trivial inputs") {
    auto region = [](double gdp, double demand) {
        Region r;
        r.gdp_per_capita = gdp;
        r.population = 1;
        r.mean_demand_gw = demand;
        return r;
    };
    std::vector<Region> constant{region(7777, 1), region(7777, 9), region(7777, 2.5)};
    CHECK(demand_weighted_gdp(constant) == doctest::Approx(7777.0).epsilon(1e-12));

    std::vector<Region> pair{region(10, 1), region(30, 3)};
    CHECK(demand_weighted_gdp(pair) == doctest::Approx(25.0).epsilon(1e-12));

    CHECK_THROWS_AS(demand_weighted_gdp({}), DataError);
}

TEST_CASE("effective price formula and clipping") {
    double reference = double(reference_weighted_gdp());

    SUBCASE("alpha 0 flattens the distribution") {
        for (double gdp : {1000.0, 40000.0, 90000.0})
            CHECK(effective_price(gdp, 80, 0, reference) == doctest::Approx(80.0));
    }
    SUBCASE("the reference gdp always pays the base price") {
        for (double alpha : {0.0, 0.7, 2.0, 3.0})
            CHECK(effective_price(reference, 80, alpha, reference) == doctest::Approx(80.0));
    }
    SUBCASE("low-gdp regions clip to zero at high alpha") {
        double raw = 80.0 * (1.0 + 2.0 * (12842.0 / reference - 1.0));
        CHECK(raw == doctest::Approx(-29.0).epsilon(0.01));  // would be negative
        CHECK(effective_price(12842, 80, 2.0, reference) == 0.0);
    }
}

TEST_CASE("clipping threshold alpha") {
    Network net = default_network();
    auto threshold = clipping_threshold_alpha(net.regions);
    REQUIRE(threshold.has_value());
    double reference = double(reference_weighted_gdp());
    double oracle = 1.0 / (1.0 - 12842.0 / reference);
    CHECK(std::abs(*threshold - oracle) <= 1e-9 * oracle);
    CHECK(*threshold == doctest::Approx(1.47).epsilon(0.005));
    // the leakage onset reported for the full study lies above this bound
    CHECK(*threshold < 1.6);

    auto region = [](double gdp, double demand) {
        Region r;
        r.gdp_per_capita = gdp;
        r.population = 1;
        r.mean_demand_gw = demand;
        return r;
    };
    std::vector<Region> pair{region(10, 1), region(30, 1)};
    auto t2 = clipping_threshold_alpha(pair);
    REQUIRE(t2.has_value());
    CHECK(*t2 == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<Region> equal{region(500, 1), region(500, 3)};
    CHECK(!clipping_threshold_alpha(equal).has_value());
}

TEST_CASE("pricing scheme invariants over a sampled grid") {
    Network net = default_network();
    double threshold = *clipping_threshold_alpha(net.regions);

    double total_demand = 0;
    for (const auto& r : net.regions) total_demand += r.mean_demand_gw;

    SplitMix64 rng(20260808);
    for (int trial = 0; trial < 500; ++trial) {
        double mu = rng.uniform(0.0, 400.0);
        double below = rng.uniform(0.0, threshold);
        double above = threshold + rng.uniform(0.0, 3.0);

        PricingScheme low = make_pricing(net, mu, below);
        double mean = 0;
        for (std::size_t r = 0; r < net.regions.size(); ++r)
            mean += low.effective_price[r] * net.regions[r].mean_demand_gw;
        mean /= total_demand;
        CHECK(std::abs(mean - mu) <= 1e-9 * std::max(1.0, mu));

        PricingScheme high = make_pricing(net, mu, above);
        double mean_high = 0;
        for (std::size_t r = 0; r < net.regions.size(); ++r)
            mean_high += high.effective_price[r] * net.regions[r].mean_demand_gw;
        mean_high /= total_demand;
        CHECK(mean_high >= mu - 1e-9 * std::max(1.0, mu));

        for (double p : low.effective_price) CHECK(p >= 0.0);
        for (double p : high.effective_price) CHECK(p >= 0.0);
    }

    SUBCASE("monotone in gdp and in the base price") {
        SplitMix64 rng2(99);
        for (int trial = 0; trial < 200; ++trial) {
            double alpha = rng2.uniform(0.0, 3.0);
            double mu = rng2.uniform(0.0, 400.0);
            double g1 = rng2.uniform(5000.0, 70000.0);
            double g2 = g1 + rng2.uniform(0.0, 30000.0);
            double ref = 40000;
            CHECK(effective_price(g2, mu, alpha, ref) >= effective_price(g1, mu, alpha, ref));
            CHECK(effective_price(g1, mu + 10, alpha, ref) >=
                  effective_price(g1, mu, alpha, ref));
        }
    }
}
