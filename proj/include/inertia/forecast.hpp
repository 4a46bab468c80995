#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inertia/data.hpp"
#include "inertia/market.hpp"

namespace inertia {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Linear point forecaster H_hat = max(theta . x, h_floor).
struct ForecastModel {
    std::vector<std::string> feature_names;
    std::vector<double> theta;
    double h_floor = 1.0;

    void validate() const;
};

// Inertia at which the nadir rule asks for the whole fleet.
double default_h_floor(const FrequencyParams& fp, const FleetSpec& fleet);

double predict(const ForecastModel& model, std::span<const double> x);
double linear_score(std::span<const double> theta, std::span<const double> x);

// Design matrix (rows = scenarios) and inertia targets.
RowMatrix design_matrix(const Dataset& data);
Eigen::VectorXd inertia_targets(const Dataset& data);

/// Per-column centering and scaling of a design matrix whose first column is
/// the intercept. Optimizers work on standardized coordinates phi; the
/// mapping to raw coefficients theta is linear and exact.
struct FeatureScaling {
    Eigen::VectorXd mean;   // mean(0) == 0
    Eigen::VectorXd scale;  // scale(0) == 1; constant columns get 1

    static FeatureScaling fit(const RowMatrix& x);
    RowMatrix apply(const RowMatrix& x) const;
    Eigen::VectorXd to_theta(const Eigen::VectorXd& phi) const;
    Eigen::VectorXd to_phi(const Eigen::VectorXd& theta) const;
};

struct MseOptions {
    bool ridge_fallback = true;
    double ridge_lambda = 1e-8;  // relative to the mean Gram diagonal
};

// Ordinary least squares via the normal equations (standardized columns).
ForecastModel fit_mse(const Dataset& data, double h_floor, const MseOptions& opts = {});

// Mean pinball loss (1/n) sum rho_tau(H_s - theta . x_s) and its subgradient.
double pinball_loss(std::span<const double> theta, const Dataset& data, double tau);
std::vector<double> pinball_subgradient(std::span<const double> theta, const Dataset& data,
                                        double tau);

struct QuantileOptions {
    int max_iters = 20000;
    double step0 = 0.1;        // initial step as a fraction of the target s.d.
    double tol = 1e-7;         // relative improvement required over `window` iterations
    int window = 250;
};

struct QuantileModel {
    std::vector<std::string> feature_names;
    std::vector<double> taus;                 // ascending, in (0, 1)
    std::vector<std::vector<double>> thetas;  // one parameter vector per tau
    double h_floor = 1.0;

    void validate() const;

    // Per-tau predictions after monotone rearrangement (sorted ascending).
    std::vector<double> predict_sorted(std::span<const double> x) const;

    // Quantile function at probability p: piecewise-linear in tau between the
    // rearranged predictions, flat outside [taus.front(), taus.back()],
    // floored at h_floor.
    double quantile(std::span<const double> x, double p) const;
};

const std::vector<double>& default_quantile_levels();

// Pinball-loss fits by normalized subgradient descent, one per tau, warm
// started from OLS shifted by the empirical residual quantile.
QuantileModel fit_quantile(const Dataset& data, const std::vector<double>& taus, double h_floor,
                           const QuantileOptions& opts = {});

}  // namespace inertia
