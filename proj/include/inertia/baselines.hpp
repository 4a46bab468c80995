#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "inertia/forecast.hpp"
#include "inertia/market.hpp"

namespace inertia {

struct ScenarioSet {
    std::vector<double> requirements;  // MW
    std::vector<double> probabilities;

    void validate() const;
};

// Box on realized inertia; only h_low matters for the worst case.
struct UncertaintySet {
    double h_low = 0.0;
    double h_high = 0.0;
    double lambda = 0.0;

    void validate() const;
};

struct StageDecision {
    double da_total = 0.0;  // MW procured day-ahead
    double cost = 0.0;      // expected (SP) or worst-case (RO) two-stage cost
};

// One uniform draw per bin of [lo, hi] split into n equal bins, in bin order.
std::vector<double> latin_hypercube(std::size_t n, double lo, double hi, std::uint64_t seed);

/// Latin-hypercube sample of the conditional quantile function on
/// [(1 - lambda)/2, (1 + lambda)/2], mapped to nadir requirements, with equal
/// probabilities.
ScenarioSet build_scenario_set(const QuantileModel& qm, std::span<const double> x,
                               std::size_t n_scen, double lambda, std::uint64_t seed,
                               const FrequencyParams& fp);

// sum_h p_h * C(t, r_h) for a day-ahead total t.
double expected_cost(double da_total, const ScenarioSet& scen, const FleetSpec& fleet);

/// Exact minimizer of the expected two-stage cost over the day-ahead total.
///
/// The expected cost is piecewise linear in t. Its kinks are at 0, the fleet
/// capacity, every day-ahead class boundary, every scenario requirement, and
/// every point r_h - (real-time capacity left when t is in a given class),
/// where the real-time shortfall starts to spill into the penalty. All of
/// them are evaluated; ties go to the smallest t.
StageDecision solve_sp(const ScenarioSet& scen, const FleetSpec& fleet);

// Box [q(1 - lambda), median] from the quantile model at x.
UncertaintySet uncertainty_set(const QuantileModel& qm, std::span<const double> x, double lambda);

/// Min-max over the box. Cost is nonincreasing in realized inertia, so the
/// worst case is h_low for every t; the problem collapses to the
/// single-scenario SP at reserve_from_inertia(h_low), clamped to capacity.
StageDecision solve_ro(const UncertaintySet& uset, const FleetSpec& fleet,
                       const FrequencyParams& fp);

// Inertia whose nadir requirement equals the SP day-ahead total.
// Throws DomainError when that total is 0.
double sp_forecast_equivalent(const ScenarioSet& scen, const FleetSpec& fleet,
                              const FrequencyParams& fp);

}  // namespace inertia
