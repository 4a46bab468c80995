#include "inertia/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "inertia/errors.hpp"
#include "inertia/random.hpp"

namespace inertia {

void TrainConfig::validate() const {
    risk.validate();
    if (restarts < 1) throw ConfigError("restarts must be >= 1");
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (!(step0 > 0.0) || !std::isfinite(step0)) throw ConfigError("step0 must be > 0");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (!(perturb >= 0.0)) throw ConfigError("perturb must be >= 0");
    if (!(warm_beta >= 0.0 && warm_beta < 1.0)) throw ConfigError("warm_beta must lie in [0, 1)");
}

namespace {

/// Objective and subgradient over a fixed dataset, for either raw theta
/// (design x) or standardized phi (design z = scaled x).
class Objective {
public:
    Objective(const RowMatrix& design, std::vector<double> realized, const FleetSpec& fleet,
              const FrequencyParams& fp, const RiskConfig& risk, double h_floor,
              bool escape_floor = false)
        : x_(design),
          realized_(std::move(realized)),
          cost_(fleet),
          risk_(risk),
          k_(fp.nadir_constant()),
          h_floor_(h_floor),
          escape_floor_(escape_floor),
          costs_(realized_.size()),
          dcdh_(realized_.size()) {}

    struct Result {
        LossValue loss;
        Eigen::VectorXd grad;
    };

    Result evaluate(const Eigen::VectorXd& params, bool want_grad) {
        const Eigen::VectorXd score = x_ * params;
        const auto n = static_cast<std::size_t>(score.size());
        double sum = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            const double raw = score(static_cast<Eigen::Index>(s));
            const bool floored = !(raw > h_floor_);
            const double h = floored ? h_floor_ : raw;
            double r_hat = k_ / h;
            const bool capped = r_hat >= cost_.capacity();
            if (capped) r_hat = cost_.capacity();
            const auto v = cost_.evaluate(r_hat, realized_[s]);
            costs_[s] = v.cost;
            sum += v.cost;
            dcdh_[s] = (floored || capped) ? 0.0 : v.slope * (-k_ / (h * h));
            if (floored && escape_floor_) {
                // The clamped region is flat. Use the derivative just inside the
                // clamp when it says that raising the forecast lowers the cost.
                const double inside = std::min(k_ / h_floor_, cost_.capacity()) * (1.0 - 1e-9);
                const double slope = cost_.evaluate(inside, realized_[s]).slope;
                if (slope > 0.0) dcdh_[s] = slope * (-k_ / (h_floor_ * h_floor_));
            }
        }

        Result out;
        out.loss.mean_cost = sum / static_cast<double>(n);
        const auto rr = var_cvar(costs_, risk_.beta);
        out.loss.var = rr.var;
        out.loss.cvar = rr.cvar;
        out.loss.objective = (1.0 - risk_.alpha) * out.loss.mean_cost + risk_.alpha * rr.cvar;
        out.loss.costs = costs_;

        if (want_grad) {
            Eigen::VectorXd w(static_cast<Eigen::Index>(n));
            const double base = (1.0 - risk_.alpha) / static_cast<double>(n);
            if (risk_.alpha > 0.0) {
                const auto cw = cvar_weights(costs_, risk_.beta);
                for (std::size_t s = 0; s < n; ++s) {
                    w(static_cast<Eigen::Index>(s)) = (base + risk_.alpha * cw[s]) * dcdh_[s];
                }
            } else {
                for (std::size_t s = 0; s < n; ++s) w(static_cast<Eigen::Index>(s)) = base * dcdh_[s];
            }
            out.grad = x_.transpose() * w;
        }
        return out;
    }

private:
    const RowMatrix& x_;
    std::vector<double> realized_;
    TwoStageCost cost_;
    RiskConfig risk_;
    double k_;
    double h_floor_;
    bool escape_floor_;
    std::vector<double> costs_;
    std::vector<double> dcdh_;
};

std::vector<double> realized_requirements(const Dataset& data) {
    std::vector<double> r(data.size());
    for (std::size_t s = 0; s < data.size(); ++s) r[s] = data.scenarios[s].realized_req;
    return r;
}

void check_inputs(std::span<const double> theta, const Dataset& data) {
    if (data.size() == 0) throw DataError("empty training set");
    if (theta.size() != data.dim()) {
        throw DataError("parameter vector has " + std::to_string(theta.size()) +
                        " entries, dataset has " + std::to_string(data.dim()) + " features");
    }
}

Objective::Result evaluate_theta(std::span<const double> theta, const Dataset& data,
                                 const FleetSpec& fleet, const FrequencyParams& fp,
                                 const RiskConfig& risk, std::optional<double> h_floor,
                                 bool want_grad) {
    check_inputs(theta, data);
    risk.validate();
    const RowMatrix x = design_matrix(data);
    Objective obj(x, realized_requirements(data), fleet, fp, risk,
                  h_floor.value_or(default_h_floor(fp, fleet)));
    return obj.evaluate(Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                          static_cast<Eigen::Index>(theta.size())),
                        want_grad);
}

}  // namespace

LossValue raobf_loss(std::span<const double> theta, const Dataset& data, const FleetSpec& fleet,
                     const FrequencyParams& fp, const RiskConfig& risk,
                     std::optional<double> h_floor) {
    return evaluate_theta(theta, data, fleet, fp, risk, h_floor, false).loss;
}

std::vector<double> raobf_subgradient(std::span<const double> theta, const Dataset& data,
                                      const FleetSpec& fleet, const FrequencyParams& fp,
                                      const RiskConfig& risk, std::optional<double> h_floor) {
    const auto g = evaluate_theta(theta, data, fleet, fp, risk, h_floor, true).grad;
    return {g.data(), g.data() + g.size()};
}

TrainReport train_raobf(const Dataset& data, const FleetSpec& fleet, const FrequencyParams& fp,
                        const TrainConfig& cfg, std::optional<double> h_floor) {
    cfg.validate();
    fleet.validate();
    if (data.size() == 0) throw DataError("empty training set");
    const auto started = std::chrono::steady_clock::now();
    const double floor = h_floor.value_or(default_h_floor(fp, fleet));

    const RowMatrix x = design_matrix(data);
    const auto scaling = FeatureScaling::fit(x);
    const RowMatrix z = scaling.apply(x);
    Objective obj(z, realized_requirements(data), fleet, fp, cfg.risk, floor, true);

    // Warm start: least squares when identifiable, otherwise the mean inertia.
    const Eigen::VectorXd y = inertia_targets(data);
    Eigen::VectorXd phi_ols = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.dim()));
    phi_ols(0) = y.mean();
    if (data.size() >= data.dim()) {
        try {
            const auto mse = fit_mse(data, floor);
            phi_ols = scaling.to_phi(Eigen::Map<const Eigen::VectorXd>(
                mse.theta.data(), static_cast<Eigen::Index>(mse.theta.size())));
        } catch (const DataError&) {
        }
    }
    double y_sd = std::sqrt((y.array() - y.mean()).square().mean());
    if (!(y_sd > 0.0)) y_sd = std::max(1.0, std::abs(y.mean()));
    const double step0 = cfg.step0 * y_sd;

    struct Run {
        Eigen::VectorXd phi;
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> trajectory;
        int iterations = 0;
    };
    auto descend = [&](Objective& f_obj, Eigen::VectorXd phi) {
        Run run;
        run.phi = phi;
        std::vector<double> best_hist;
        for (int k = 1; k <= cfg.max_iters; ++k) {
            run.iterations = k;
            const auto res = f_obj.evaluate(phi, true);
            const double f = res.loss.objective;
            if (!std::isfinite(f)) break;
            run.trajectory.push_back(f);
            if (f < run.best) {
                run.best = f;
                run.phi = phi;
            }
            best_hist.push_back(run.best);

            const double gn = res.grad.norm();
            if (!(gn > 0.0)) break;
            if (k > cfg.window) {
                const double earlier = best_hist[best_hist.size() - 1 - static_cast<std::size_t>(cfg.window)];
                if (earlier - run.best <= cfg.tol * std::abs(run.best)) break;
            }
            phi -= (step0 / std::sqrt(static_cast<double>(k))) * res.grad / gn;
        }
        return run;
    };

    // With beta close to 1 only a handful of samples carry CVaR weight, so the
    // multi-start search runs at warm_beta and the target beta continues from
    // its best point.
    const bool continuation = cfg.risk.alpha > 0.0 && cfg.risk.beta > cfg.warm_beta;
    std::optional<Objective> warm_obj;
    if (continuation) {
        warm_obj.emplace(z, realized_requirements(data), fleet, fp,
                         RiskConfig{cfg.risk.alpha, cfg.warm_beta}, floor, true);
    }
    Objective& search_obj = continuation ? *warm_obj : obj;

    TrainReport best_report;
    Run best_run;
    for (int r = 0; r < cfg.restarts; ++r) {
        Eigen::VectorXd phi = phi_ols;
        if (r > 0) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            phi(0) += cfg.perturb * y_sd * rng.normal();
            for (Eigen::Index j = 1; j < phi.size(); ++j) {
                phi(j) += cfg.perturb * (std::abs(phi(j)) + 0.1 * y_sd) * rng.normal();
            }
        }
        auto run = descend(search_obj, phi);
        best_report.iterations += run.iterations;
        if (std::isfinite(run.best) && run.best < best_run.best) {
            best_run = std::move(run);
            best_report.restart_index = r;
        }
    }
    if (!std::isfinite(best_run.best)) {
        throw TrainingError("training diverged on all " + std::to_string(cfg.restarts) + " restarts");
    }
    if (continuation) {
        auto run = descend(obj, best_run.phi);
        best_report.iterations += run.iterations;
        if (std::isfinite(run.best)) best_run = std::move(run);
    }
    const Eigen::VectorXd best_phi = best_run.phi;
    best_report.loss_trajectory = std::move(best_run.trajectory);
    best_report.warm_started = continuation;

    const Eigen::VectorXd theta = scaling.to_theta(best_phi);
    best_report.model.feature_names = data.feature_names;
    best_report.model.theta.assign(theta.data(), theta.data() + theta.size());
    best_report.model.h_floor = floor;
    best_report.model.validate();

    const auto final_loss = raobf_loss(best_report.model.theta, data, fleet, fp, cfg.risk, floor);
    best_report.objective = final_loss.objective;
    best_report.mean_cost = final_loss.mean_cost;
    best_report.var = final_loss.var;
    best_report.cvar = final_loss.cvar;
    best_report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return best_report;
}

}  // namespace inertia
