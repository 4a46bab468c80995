#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "inertia/data.hpp"
#include "inertia/forecast.hpp"
#include "inertia/market.hpp"

namespace inertia {

struct EvalConfig {
    double beta_eval = 0.95;
    std::size_t k_size = 200;  // realizations drawn per test scenario
    std::uint64_t seed = 11;

    void validate() const;
};

struct EvalRow {
    std::string timestamp;
    double h_true = 0.0;
    double h_hat = 0.0;     // point forecast (or the inertia equivalent of a schedule)
    double da_total = 0.0;  // MW procured day-ahead
    double soc = 0.0;       // cost at the recorded realized requirement
    double soc_mean = 0.0;  // mean cost over the perturbation set
    double var = 0.0;
    double cvar = 0.0;
    double max_soc = 0.0;
    double ape = 0.0;  // |h_hat - h_true| / h_true * 100
};

struct EvalReport {
    std::string label;
    double msoc = 0.0;
    double mcvar = 0.0;
    double mmaxsoc = 0.0;
    double mape = 0.0;
    std::vector<EvalRow> per_scenario;
};

/// Realized-requirement draws for each test scenario: k_size Latin-hypercube
/// points on (0, 1) pushed through the quantile model at x_n and the nadir
/// rule. Draws for scenario n depend only on (cfg.seed, n), so every method
/// evaluated on the same test set sees the same perturbations.
std::vector<std::vector<double>> perturbation_sets(const Dataset& test, const QuantileModel& qm,
                                                   const FrequencyParams& fp,
                                                   const EvalConfig& cfg);

// Fixed day-ahead totals (one per test scenario) against recorded and
// perturbed realizations. `h_hat` is only used for the APE column.
EvalReport evaluate_schedules(std::span<const double> da_totals, std::span<const double> h_hat,
                              const Dataset& test, const FleetSpec& fleet,
                              const std::vector<std::vector<double>>& perturbations,
                              const EvalConfig& cfg);

EvalReport evaluate(const ForecastModel& model, const Dataset& test, const FleetSpec& fleet,
                    const FrequencyParams& fp, const EvalConfig& cfg, const QuantileModel& qm);

// Same, with precomputed perturbation sets.
EvalReport evaluate(const ForecastModel& model, const Dataset& test, const FleetSpec& fleet,
                    const FrequencyParams& fp, const EvalConfig& cfg,
                    const std::vector<std::vector<double>>& perturbations);

struct ComparisonTable {
    struct Gap {
        std::string a;
        std::string b;
        std::string metric;
        double percent = 0.0;  // (a - b) / b * 100
    };
    std::vector<EvalReport> reports;  // per_scenario rows dropped
    std::vector<Gap> gaps;            // unordered pairs i < j, per metric

    void write_csv(std::ostream& out) const;
    void write_text(std::ostream& out) const;
};

// Percentage gap (a - b) / b * 100.
double percent_gap(double a, double b);

ComparisonTable compare(const std::vector<EvalReport>& reports);

}  // namespace inertia
