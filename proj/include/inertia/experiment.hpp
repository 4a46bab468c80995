#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "inertia/baselines.hpp"
#include "inertia/config.hpp"
#include "inertia/data.hpp"
#include "inertia/eval.hpp"
#include "inertia/forecast.hpp"
#include "inertia/market.hpp"
#include "inertia/train.hpp"

namespace inertia {

// The heavy and light tailed generator settings used by the tail-effect runs.
GeneratorConfig default_tail_high();
GeneratorConfig default_tail_low();

/// Everything a CLI run needs, read from one key-value file.
///
/// Sections and keys are listed in docs/config.md. Unknown keys are rejected.
struct ExperimentConfig {
    std::filesystem::path data = "data.csv";
    std::filesystem::path results = "results";
    std::size_t n_scenarios = 35424;

    FrequencyParams fp;
    FleetSpec fleet = FleetSpec::reference();
    GeneratorConfig generator;
    TrainConfig train;
    EvalConfig eval;
    QuantileOptions quantile;

    std::vector<double> sweep_alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> sweep_betas = {0.5, 0.9};

    std::vector<std::size_t> sp_scenarios = {5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    double sp_lambda = 0.95;
    std::uint64_t sp_seed = 99;
    double timing_min_seconds = 0.2;  // each timing loop repeats until at least this long

    std::vector<double> ro_lambdas = {0.95, 0.99, 0.999, 0.9999};
    std::vector<double> ro_betas = {0.5, 0.7, 0.9, 0.95, 0.99};
    bool ro_include_beta_max = true;
    std::size_t tail_n_scenarios = 35424;
    GeneratorConfig tail_high = default_tail_high();
    GeneratorConfig tail_low = default_tail_low();

    void validate() const;

    static ExperimentConfig from_config(const KeyValueConfig& kv);
    static ExperimentConfig load(const std::filesystem::path& path);

    // Every effective setting as sorted key = value lines.
    std::string canonical() const;
    // FNV-1a of canonical(), as 16 hex digits.
    std::string hash() const;
};


/// Train/test split with the quantile model and perturbation sets that every
/// method is evaluated against.
struct Benchmark {
    Dataset train;
    Dataset test;
    QuantileModel qm;
    std::vector<std::vector<double>> perturbations;
};

Benchmark prepare_benchmark(const Dataset& data, const ExperimentConfig& cfg);

EvalReport evaluate_model(const ForecastModel& model, const Benchmark& b,
                          const ExperimentConfig& cfg, const std::string& label);

TrainReport train_with(const Benchmark& b, const ExperimentConfig& cfg, double alpha, double beta);

struct SweepRow {
    double alpha = 0.0;
    double beta = 0.0;
    double objective = 0.0;
    EvalReport report;
};

// Rows ordered by beta block, then ascending alpha.
std::vector<SweepRow> run_sweep(const Benchmark& b, const ExperimentConfig& cfg);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& config_hash,
                     std::ostream& out);
void write_sweep_svg(const std::vector<SweepRow>& rows, std::ostream& out);

// Day-ahead totals of the per-instance stochastic program.
std::vector<double> sp_schedules(const Benchmark& b, const ExperimentConfig& cfg,
                                 std::size_t n_scen);
// Day-ahead totals of the per-instance robust program.
std::vector<double> ro_schedules(const Benchmark& b, const ExperimentConfig& cfg, double lambda);

// Evaluates fixed schedules; h_hat is the inertia equivalent K / t.
EvalReport evaluate_totals(const std::vector<double>& totals, const Benchmark& b,
                           const ExperimentConfig& cfg, const std::string& label);

struct Timing {
    double seconds_per_instance = 0.0;
    std::size_t repetitions = 0;
};

// Point forecast plus day-ahead clearing, per test instance.
Timing time_forecast_pipeline(const ForecastModel& model, const Benchmark& b,
                              const ExperimentConfig& cfg);
// Scenario generation plus the stochastic program, per test instance.
Timing time_sp_pipeline(const Benchmark& b, const ExperimentConfig& cfg, std::size_t n_scen);

struct SpRow {
    std::size_t n_scen = 0;
    EvalReport report;
    double gap_msoc = 0.0;  // RAOBF vs PF-SP, percent
    double gap_mcvar = 0.0;
    double gap_mmaxsoc = 0.0;
};

struct SpComparison {
    EvalReport raobf;
    std::vector<SpRow> rows;
};

SpComparison run_compare_sp(const Benchmark& b, const ExperimentConfig& cfg,
                            const ForecastModel& raobf_alpha0);
void write_sp_csv(const SpComparison& c, const std::string& config_hash, std::ostream& out);

struct RoRow {
    double lambda = 0.0;
    double beta = 0.0;
    bool beta_is_max = false;
    double gap_msoc = 0.0;  // RAOBF(alpha = 1, beta) vs PF-RO(lambda), percent
    double gap_mcvar = 0.0;
    double gap_mmaxsoc = 0.0;
};

struct RoComparison {
    std::vector<EvalReport> ro;     // one per lambda
    std::vector<EvalReport> raobf;  // one per beta
    std::vector<double> betas;      // effective betas, beta_max last when requested
    std::vector<RoRow> rows;
};

// Betas for the alpha = 1 runs: ro_betas, then beta_max of the training set.
std::vector<double> ro_beta_grid(const ExperimentConfig& cfg, std::size_t n_train);

RoComparison run_compare_ro(const Benchmark& b, const ExperimentConfig& cfg);
void write_ro_csv(const RoComparison& c, const std::string& config_hash, std::ostream& out);

struct TailRow {
    std::string label;  // "high_tail" or "low_tail"
    double beta = 0.0;
    bool beta_is_max = false;
    double kurtosis = 0.0;  // excess kurtosis of the relative noise in the training set
    double gap_mmaxsoc = 0.0;
    double gap_msoc = 0.0;
};

// RAOBF(alpha = 1) against PF-RO at the largest lambda, on both tail datasets.
std::vector<TailRow> run_tail_effect(const ExperimentConfig& cfg);
void write_tail_csv(const std::vector<TailRow>& rows, const std::string& config_hash,
                    std::ostream& out);

}  // namespace inertia
