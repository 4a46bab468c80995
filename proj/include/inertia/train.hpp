#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "inertia/data.hpp"
#include "inertia/forecast.hpp"
#include "inertia/market.hpp"
#include "inertia/risk.hpp"

namespace inertia {

struct TrainConfig {
    RiskConfig risk;
    int restarts = 3;
    int max_iters = 1500;
    double step0 = 0.1;     // initial step, as a fraction of the target s.d., in standardized space
    double tol = 1e-7;      // stop when the best objective improves less than tol (relative) ...
    int window = 200;       // ... over this many iterations
    double perturb = 0.15;  // scale of the restart perturbations around the OLS warm start
    double warm_beta = 0.95;  // for alpha > 0 and beta above this, search here first
    std::uint64_t seed = 7;

    void validate() const;
};

struct TrainReport {
    ForecastModel model;
    double objective = 0.0;  // (1 - alpha) mean + alpha CVaR at the returned model
    double mean_cost = 0.0;
    double var = 0.0;
    double cvar = 0.0;
    std::vector<double> loss_trajectory;  // objective at every iterate of the final run
    int restart_index = 0;
    int iterations = 0;        // summed over all runs
    bool warm_started = false;  // beta continuation from warm_beta
    double seconds = 0.0;
};

struct LossValue {
    double objective = 0.0;
    double mean_cost = 0.0;
    double var = 0.0;
    double cvar = 0.0;
    std::vector<double> costs;  // C(H_hat_s, H_s) per scenario
};

/// (1 - alpha) * mean_s C(H_hat_s, R_s) + alpha * CVaR_beta over the scenarios
/// of `data`, with H_hat_s = max(theta . x_s, h_floor) and C the two-stage
/// reserve cost. `h_floor` defaults to default_h_floor(fp, fleet).
LossValue raobf_loss(std::span<const double> theta, const Dataset& data, const FleetSpec& fleet,
                     const FrequencyParams& fp, const RiskConfig& risk,
                     std::optional<double> h_floor = std::nullopt);

/// Subgradient of raobf_loss with respect to theta.
///
/// Per scenario, dC/dtheta = dC/dr_hat * (-K / H_hat^2) * x_s where
/// r_hat = K / H_hat is the nadir reserve; it is 0 where the h_floor or the
/// capacity clamp is active.
std::vector<double> raobf_subgradient(std::span<const double> theta, const Dataset& data,
                                      const FleetSpec& fleet, const FrequencyParams& fp,
                                      const RiskConfig& risk,
                                      std::optional<double> h_floor = std::nullopt);

// Multi-start normalized subgradient descent on raobf_loss.
TrainReport train_raobf(const Dataset& data, const FleetSpec& fleet, const FrequencyParams& fp,
                        const TrainConfig& cfg, std::optional<double> h_floor = std::nullopt);

}  // namespace inertia
