#include <doctest.h>

#include <cmath>

#include "inertia/errors.hpp"
#include "inertia/market.hpp"
#include "inertia/random.hpp"
#include "oracles.hpp"

using namespace inertia;

TEST_CASE("nadir rule with the default constants") {
    const FrequencyParams fp;
    CHECK(fp.nadir_constant() == doctest::Approx(10125000.0));
    CHECK(reserve_from_inertia(5000.0, fp) == doctest::Approx(2025.0));
    CHECK(reserve_from_inertia(2000.0, fp) == doctest::Approx(5062.5));
    CHECK(reserve_from_inertia(10000.0, fp) == doctest::Approx(1012.5));
    CHECK(inertia_for_reserve(2025.0, fp) == doctest::Approx(5000.0));
    CHECK_THROWS_AS(reserve_from_inertia(0.0, fp), DomainError);
    CHECK_THROWS_AS(reserve_from_inertia(-1.0, fp), DomainError);
}

TEST_CASE("reserve is decreasing in inertia and the inverse round-trips") {
    const FrequencyParams fp;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double h1 = rng.uniform(500.0, 20000.0);
        const double h2 = h1 + rng.uniform(1.0, 500.0);
        CHECK(reserve_from_inertia(h2, fp) < reserve_from_inertia(h1, fp));
        CHECK(inertia_for_reserve(reserve_from_inertia(h1, fp), fp) == doctest::Approx(h1));
    }
}

TEST_CASE("steady-state branch only ever raises the requirement") {
    const FrequencyParams fp;
    for (double h : {1000.0, 3000.0, 8000.0}) {
        CHECK(reserve_from_inertia(h, fp, true) >= reserve_from_inertia(h, fp, false));
    }
}

TEST_CASE("RoCoF limit sits at dp_loss / (2 rocof_max)") {
    const FrequencyParams fp;
    CHECK(check_rocof(7200.0, fp));
    CHECK_FALSE(check_rocof(7199.0, fp));
    CHECK(check_rocof(9000.0, fp));
}

TEST_CASE("reference fleet day-ahead clearing") {
    const auto fleet = FleetSpec::reference();
    CHECK(fleet.total_capacity() == doctest::Approx(5600.0));

    const auto d = clear_day_ahead(2025.0, fleet);
    CHECK(d.da_cost == doctest::Approx(95175.0));
    CHECK(d.da_schedule[0] == doctest::Approx(2025.0));
    CHECK(d.da_schedule[1] == doctest::Approx(0.0));

    const auto full = clear_day_ahead(5600.0, fleet);
    CHECK(full.da_cost == doctest::Approx(355000.0));
    CHECK_THROWS_AS(clear_day_ahead(5600.5, fleet), InfeasibleRequirement);
    CHECK_THROWS_AS(clear_day_ahead(-1.0, fleet), DomainError);
}

TEST_CASE("real-time completion of a short day-ahead position") {
    const auto fleet = FleetSpec::reference();
    const auto da = clear_day_ahead(2025.0, fleet);
    const auto rt = clear_real_time(2500.0, da, fleet);
    CHECK(rt.rt_schedule[1] == doctest::Approx(475.0));
    CHECK(rt.rt_cost == doctest::Approx(95000.0));
    CHECK(rt.slack == doctest::Approx(0.0));
    CHECK(rt.total_cost == doctest::Approx(190175.0));

    // Beyond the 600 MW of OCGT headroom the penalty applies.
    const auto deep = clear_real_time(3000.0, da, fleet);
    CHECK(deep.slack == doctest::Approx(375.0));
    CHECK(deep.total_cost == doctest::Approx(95175.0 + 600.0 * 200.0 + 375.0 * 3000.0));

    const auto end_to_end = total_cost(5000.0, 2500.0, fleet, FrequencyParams{});
    CHECK(end_to_end.total_cost == doctest::Approx(190175.0));
}

TEST_CASE("infeasible requirement carries its numbers") {
    try {
        clear_day_ahead(9000.0, FleetSpec::reference());
        FAIL("expected InfeasibleRequirement");
    } catch (const InfeasibleRequirement& e) {
        CHECK(e.requirement() == 9000.0);
        CHECK(e.capacity() == 5600.0);
    }
}

TEST_CASE("fleet validation") {
    auto f = FleetSpec::reference();
    f.penalty_price = 100.0;  // below the OCGT real-time price
    CHECK_THROWS_AS(f.validate(), ConfigError);
    FleetSpec empty;
    CHECK_THROWS_AS(empty.validate(), ConfigError);
}

namespace {

FleetSpec random_small_fleet(Rng& rng) {
    FleetSpec f;
    const int m = 1 + static_cast<int>(rng.uniform() * 3.0);
    for (int i = 0; i < m; ++i) {
        UnitClass u;
        u.name = "c" + std::to_string(i);
        u.count = 1 + static_cast<int>(rng.uniform() * 3.0);
        u.capacity_each = static_cast<double>(1 + static_cast<int>(rng.uniform() * 10.0));
        // Distinct prices: ties make the day-ahead schedule ambiguous.
        u.price_da = std::round(rng.uniform(10.0, 300.0)) + 0.001 * i;
        u.price_rt = std::round(rng.uniform(10.0, 400.0)) + 0.001 * i;
        u.rt_flexible = rng.uniform() < 0.6;
        f.classes.push_back(u);
    }
    f.penalty_price = 1000.0;
    return f;
}

}  // namespace

TEST_CASE("greedy day-ahead clearing matches brute force") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto fleet = random_small_fleet(rng);
        std::vector<int> caps;
        std::vector<double> prices;
        for (const auto& c : fleet.classes) {
            caps.push_back(static_cast<int>(c.capacity()));
            prices.push_back(c.price_da);
        }
        const int cap = static_cast<int>(fleet.total_capacity());
        const int req = static_cast<int>(rng.uniform() * (cap + 1));
        CHECK(clear_day_ahead(req, fleet).da_cost ==
              doctest::Approx(oracle::brute_force_da(req, caps, prices)).epsilon(1e-12));
    }
}

TEST_CASE("two-stage evaluator agrees with clearing and brute force") {
    Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const auto fleet = random_small_fleet(rng);
        const TwoStageCost cost(fleet);
        const int cap = static_cast<int>(fleet.total_capacity());
        const int t = static_cast<int>(rng.uniform() * (cap + 1));
        const int realized = static_cast<int>(rng.uniform() * (cap + 10));
        const auto v = cost.evaluate(t, realized);
        const auto d = cost_for_procurement(t, realized, fleet);
        CHECK(v.cost == doctest::Approx(d.total_cost));
        CHECK(v.da_cost == doctest::Approx(d.da_cost));
        CHECK(v.cost == doctest::Approx(oracle::brute_force_two_stage(t, realized, fleet)));
    }
}

TEST_CASE("two-stage slope is the right derivative") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const auto fleet = random_small_fleet(rng);
        const TwoStageCost cost(fleet);
        const double cap = cost.capacity();
        const double t = rng.uniform(0.0, cap - 0.01);
        const double realized = rng.uniform(0.0, cap * 1.1);
        const double h = 1e-6;
        const double fd = (cost.evaluate(t + h, realized).cost - cost.evaluate(t, realized).cost) / h;
        CHECK(cost.evaluate(t, realized).slope == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("two-stage cost is nondecreasing in the realized requirement") {
    Rng rng(14);
    const auto fleet = FleetSpec::reference();
    const TwoStageCost cost(fleet);
    for (int i = 0; i < 500; ++i) {
        const double t = rng.uniform(0.0, 5600.0);
        const double r1 = rng.uniform(0.0, 6000.0);
        const double r2 = r1 + rng.uniform(0.0, 500.0);
        CHECK(cost.evaluate(t, r2).cost >= cost.evaluate(t, r1).cost);
    }
}
