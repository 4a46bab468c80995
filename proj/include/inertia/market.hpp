#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace inertia {

// Frequency-security constants. Inertia is expressed in MW*s throughout.
struct FrequencyParams {
    double dp_loss = 1800.0;     // largest credible infeed loss, MW
    double t_deliver = 10.0;     // primary response delivery time, s
    double df_nadir_max = 0.8;   // maximum nadir deviation, Hz
    double df_ss_max = 0.5;      // maximum steady-state deviation, Hz
    double rocof_max = 0.125;    // maximum rate of change of frequency, Hz/s
    double damping = 0.01;       // load damping, fraction of demand per Hz
    double demand = 30000.0;     // system demand, MW

    void validate() const;

    // dp_loss^2 * t_deliver / (4 * df_nadir_max): the nadir rule is R = K / H.
    double nadir_constant() const;
};

struct UnitClass {
    std::string name;
    int count = 1;
    double capacity_each = 0.0;  // MW per unit
    double price_da = 0.0;       // GBP/MW day-ahead
    double price_rt = 0.0;       // GBP/MW real-time (balancing)
    bool rt_flexible = false;

    double capacity() const { return count * capacity_each; }
};

struct FleetSpec {
    std::vector<UnitClass> classes;
    double penalty_price = 3000.0;  // GBP/MW of unmet real-time requirement

    void validate() const;
    double total_capacity() const;

    // 100 CCGT x 50 MW @ 47 (inflexible in real time), 30 OCGT x 20 MW @ 200.
    static FleetSpec reference();
};

struct DispatchResult {
    std::vector<double> da_schedule;  // per class, MW
    std::vector<double> rt_schedule;  // per class, MW
    double slack = 0.0;               // unmet real-time requirement, MW
    double da_cost = 0.0;
    double rt_cost = 0.0;
    double total_cost = 0.0;  // da_cost + rt_cost + slack * penalty

    double da_total() const;
    double rt_total() const;
};

// Minimum reserve satisfying the nadir constraint and, optionally, the
// steady-state deviation constraint. Throws DomainError for h <= 0.
double reserve_from_inertia(double h, const FrequencyParams& fp, bool include_ss = false);

// Inverse of the nadir branch: the inertia whose nadir reserve equals `reserve`.
double inertia_for_reserve(double reserve, const FrequencyParams& fp);

// True iff dp_loss / (2h) <= rocof_max.
bool check_rocof(double h, const FrequencyParams& fp);

// Merit-order day-ahead clearing; only the da_* fields are populated.
// Throws InfeasibleRequirement when requirement exceeds the fleet capacity.
DispatchResult clear_day_ahead(double requirement, const FleetSpec& fleet);

// Covers the shortfall left by `da` with flexible residual capacity in
// real-time merit order; any remainder becomes slack.
DispatchResult clear_real_time(double realized_req, const DispatchResult& da,
                               const FleetSpec& fleet);

// Forecast inertia -> nadir reserve (clamped to capacity) -> both markets.
DispatchResult total_cost(double h_forecast, double realized_req, const FleetSpec& fleet,
                          const FrequencyParams& fp);

// Same as total_cost but starting from a day-ahead total instead of an inertia
// forecast. The total is clamped to [0, capacity].
DispatchResult cost_for_procurement(double da_total, double realized_req, const FleetSpec& fleet);

/// Allocation-free evaluator of the two-stage cost C(r_hat, R) and its
/// right derivative with respect to the day-ahead total r_hat.
///
/// The derivative comes from the real-time LP dual: with pi the marginal
/// real-time price (penalty if slack is positive, 0 without shortfall) and m
/// the day-ahead marginal class,
///   dC/dr_hat = price_da[m] - pi + [m flexible] * max(0, pi - price_rt[m]).
/// The last term accounts for the real-time headroom that extra day-ahead
/// volume in class m takes away.
class TwoStageCost {
public:
    struct Value {
        double cost = 0.0;
        double slope = 0.0;   // right derivative dC/dr_hat; 0 at or beyond capacity
        double da_cost = 0.0;
        double shortfall = 0.0;
    };

    explicit TwoStageCost(const FleetSpec& fleet);

    Value evaluate(double r_hat, double realized_req) const;
    double capacity() const { return capacity_; }
    double penalty() const { return penalty_; }

private:
    struct Entry {
        double cap;
        double price_da;
        double price_rt;
        double cum_before;  // day-ahead capacity of cheaper classes
        bool flexible;
    };
    std::vector<Entry> da_order_;         // classes in day-ahead merit order
    std::vector<std::size_t> rt_order_;   // indices into da_order_, flexible only
    double capacity_ = 0.0;
    double penalty_ = 0.0;
};

}  // namespace inertia
