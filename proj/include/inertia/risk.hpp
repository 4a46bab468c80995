#pragma once

#include <span>
#include <vector>

namespace inertia {

struct RiskConfig {
    double alpha = 0.0;  // weight on CVaR, in [0, 1]
    double beta = 0.95;  // confidence level, in [0, 1)

    void validate() const;
};

struct RiskResult {
    double var = 0.0;
    double cvar = 0.0;
    std::vector<double> excesses;  // max(0, cost_s - var)
};

// Largest confidence level with a finite-sample meaning: the tail holds
// exactly the worst sample.
double beta_max(std::size_t n_samples);

// Empirical VaR/CVaR. VaR is the smallest minimizer of the Rockafellar-Uryasev
// function v + sum(max(0, c - v)) / ((1 - beta) n), i.e. a lower order statistic.
RiskResult var_cvar(std::span<const double> costs, double beta);

/// Per-sample weights w (summing to 1) such that CVaR = sum w_s * cost_s.
///
/// Samples strictly above VaR get 1/((1-beta) n); samples tied at VaR share
/// the remaining tail mass equally. The weighted sum of per-sample gradients
/// is a subgradient of CVaR.
std::vector<double> cvar_weights(std::span<const double> costs, double beta);

// sum_s w_s * dcosts_dtheta[s] with w from cvar_weights.
std::vector<double> cvar_subgradient(std::span<const double> costs,
                                     const std::vector<std::vector<double>>& dcosts_dtheta,
                                     double beta);

}  // namespace inertia
