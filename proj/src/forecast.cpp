#include "inertia/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "inertia/errors.hpp"

namespace inertia {

void ForecastModel::validate() const {
    if (theta.empty()) throw ConfigError("forecast model has no parameters");
    if (!feature_names.empty() && feature_names.size() != theta.size()) {
        throw ConfigError("forecast model: feature_names and theta differ in length");
    }
    for (double t : theta) {
        if (!std::isfinite(t)) throw ConfigError("forecast model: non-finite parameter");
    }
    if (!(h_floor > 0.0)) throw ConfigError("forecast model: h_floor must be > 0");
}

double default_h_floor(const FrequencyParams& fp, const FleetSpec& fleet) {
    return fp.nadir_constant() / fleet.total_capacity();
}

double linear_score(std::span<const double> theta, std::span<const double> x) {
    if (theta.size() != x.size()) {
        throw DataError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                        std::to_string(theta.size()));
    }
    return std::inner_product(theta.begin(), theta.end(), x.begin(), 0.0);
}

double predict(const ForecastModel& model, std::span<const double> x) {
    return std::max(linear_score(model.theta, x), model.h_floor);
}

RowMatrix design_matrix(const Dataset& data) {
    RowMatrix x(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(data.dim()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& f = data.scenarios[i].features;
        if (f.size() != data.dim()) throw DataError("ragged feature vectors in dataset");
        for (std::size_t j = 0; j < f.size(); ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f[j];
        }
    }
    return x;
}

Eigen::VectorXd inertia_targets(const Dataset& data) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        y(static_cast<Eigen::Index>(i)) = data.scenarios[i].inertia_true;
    }
    return y;
}

FeatureScaling FeatureScaling::fit(const RowMatrix& x) {
    FeatureScaling s;
    const auto d = x.cols();
    s.mean = Eigen::VectorXd::Zero(d);
    s.scale = Eigen::VectorXd::Ones(d);
    for (Eigen::Index j = 1; j < d; ++j) {
        const double m = x.col(j).mean();
        const double sd = std::sqrt((x.col(j).array() - m).square().mean());
        if (sd > 1e-12 * std::max(1.0, std::abs(m))) {
            s.mean(j) = m;
            s.scale(j) = sd;
        }
    }
    return s;
}

RowMatrix FeatureScaling::apply(const RowMatrix& x) const {
    RowMatrix z = x;
    for (Eigen::Index j = 1; j < x.cols(); ++j) {
        z.col(j) = (x.col(j).array() - mean(j)) / scale(j);
    }
    return z;
}

Eigen::VectorXd FeatureScaling::to_theta(const Eigen::VectorXd& phi) const {
    Eigen::VectorXd theta = phi.cwiseQuotient(scale);
    theta(0) = phi(0) - theta.tail(theta.size() - 1).dot(mean.tail(mean.size() - 1));
    return theta;
}

Eigen::VectorXd FeatureScaling::to_phi(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd phi = theta.cwiseProduct(scale);
    phi(0) = theta(0) + theta.tail(theta.size() - 1).dot(mean.tail(mean.size() - 1));
    return phi;
}

ForecastModel fit_mse(const Dataset& data, double h_floor, const MseOptions& opts) {
    if (data.size() < data.dim()) {
        throw DataError("fit_mse needs at least as many scenarios as features");
    }
    const RowMatrix x = design_matrix(data);
    const Eigen::VectorXd y = inertia_targets(data);
    const auto scaling = FeatureScaling::fit(x);
    const RowMatrix z = scaling.apply(x);

    Eigen::MatrixXd gram = z.transpose() * z;
    const Eigen::VectorXd rhs = z.transpose() * y;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const auto diag = ldlt.vectorD().cwiseAbs();
    const bool singular = ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
                          diag.minCoeff() <= 1e-12 * diag.maxCoeff();
    if (singular) {
        if (!opts.ridge_fallback) throw DataError("fit_mse: Gram matrix is singular");
        const double lambda = opts.ridge_lambda * gram.diagonal().mean();
        gram.diagonal().array() += lambda;
        ldlt.compute(gram);
    }
    const Eigen::VectorXd phi = ldlt.solve(rhs);
    const Eigen::VectorXd theta = scaling.to_theta(phi);

    ForecastModel m;
    m.feature_names = data.feature_names;
    m.theta.assign(theta.data(), theta.data() + theta.size());
    m.h_floor = h_floor;
    m.validate();
    return m;
}

namespace {

double pinball(double r, double tau) { return r >= 0.0 ? tau * r : (tau - 1.0) * r; }

void check_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
}

// Lower empirical quantile.
double empirical_quantile(std::vector<double> v, double tau) {
    const auto idx = static_cast<std::size_t>(std::floor(tau * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

}  // namespace

double pinball_loss(std::span<const double> theta, const Dataset& data, double tau) {
    check_tau(tau);
    double sum = 0.0;
    for (const auto& s : data.scenarios) {
        sum += pinball(s.inertia_true - linear_score(theta, s.features), tau);
    }
    return sum / static_cast<double>(data.size());
}

std::vector<double> pinball_subgradient(std::span<const double> theta, const Dataset& data,
                                        double tau) {
    check_tau(tau);
    std::vector<double> g(theta.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (const auto& s : data.scenarios) {
        const double r = s.inertia_true - linear_score(theta, s.features);
        const double psi = r < 0.0 ? tau - 1.0 : tau;
        for (std::size_t j = 0; j < g.size(); ++j) g[j] -= psi * s.features[j] * inv_n;
    }
    return g;
}

void QuantileModel::validate() const {
    if (taus.empty() || taus.size() != thetas.size()) {
        throw ConfigError("quantile model: one parameter vector per level is required");
    }
    for (std::size_t k = 0; k < taus.size(); ++k) {
        check_tau(taus[k]);
        if (k > 0 && !(taus[k] > taus[k - 1])) throw ConfigError("quantile levels must ascend");
        if (thetas[k].size() != thetas.front().size()) throw ConfigError("ragged quantile model");
    }
    if (!(h_floor > 0.0)) throw ConfigError("quantile model: h_floor must be > 0");
}

std::vector<double> QuantileModel::predict_sorted(std::span<const double> x) const {
    std::vector<double> v(taus.size());
    for (std::size_t k = 0; k < taus.size(); ++k) v[k] = linear_score(thetas[k], x);
    std::sort(v.begin(), v.end());
    return v;
}

double QuantileModel::quantile(std::span<const double> x, double p) const {
    const auto v = predict_sorted(x);
    double h;
    if (p <= taus.front()) {
        h = v.front();
    } else if (p >= taus.back()) {
        h = v.back();
    } else {
        const auto it = std::upper_bound(taus.begin(), taus.end(), p);
        const auto k = static_cast<std::size_t>(it - taus.begin());
        const double w = (p - taus[k - 1]) / (taus[k] - taus[k - 1]);
        h = v[k - 1] + w * (v[k] - v[k - 1]);
    }
    return std::max(h, h_floor);
}

const std::vector<double>& default_quantile_levels() {
    static const std::vector<double> levels = {0.001, 0.01, 0.025, 0.05, 0.1,   0.25, 0.5,
                                               0.75,  0.9,  0.95,  0.975, 0.99, 0.999};
    return levels;
}

QuantileModel fit_quantile(const Dataset& data, const std::vector<double>& taus, double h_floor,
                           const QuantileOptions& opts) {
    if (data.size() < data.dim()) {
        throw DataError("fit_quantile needs at least as many scenarios as features");
    }
    if (opts.max_iters < 1 || opts.window < 1 || !(opts.tol > 0.0) || !(opts.step0 > 0.0)) {
        throw ConfigError("invalid quantile regression options");
    }
    std::vector<double> levels = taus;
    std::sort(levels.begin(), levels.end());
    for (double t : levels) check_tau(t);

    const RowMatrix x = design_matrix(data);
    const Eigen::VectorXd y = inertia_targets(data);
    const auto scaling = FeatureScaling::fit(x);
    const RowMatrix z = scaling.apply(x);
    const auto n = static_cast<double>(y.size());

    const auto mse = fit_mse(data, h_floor);
    const Eigen::VectorXd phi_mse =
        scaling.to_phi(Eigen::Map<const Eigen::VectorXd>(mse.theta.data(), mse.theta.size()));
    const Eigen::VectorXd resid0 = y - z * phi_mse;
    const std::vector<double> resid(resid0.data(), resid0.data() + resid0.size());

    double y_sd = std::sqrt((y.array() - y.mean()).square().mean());
    if (!(y_sd > 0.0)) y_sd = std::max(1.0, std::abs(y.mean()));
    const double step0 = opts.step0 * y_sd;

    QuantileModel qm;
    qm.feature_names = data.feature_names;
    qm.taus = levels;
    qm.h_floor = h_floor;

    for (double tau : levels) {
        Eigen::VectorXd phi = phi_mse;
        phi(0) += empirical_quantile(resid, tau);

        Eigen::VectorXd best_phi = phi;
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> best_hist;
        std::vector<double> trajectory;
        bool converged = false;
        Eigen::VectorXd psi(y.size());

        for (int k = 1; k <= opts.max_iters; ++k) {
            const Eigen::VectorXd r = y - z * phi;
            double loss = 0.0;
            for (Eigen::Index s = 0; s < r.size(); ++s) {
                loss += pinball(r(s), tau);
                psi(s) = r(s) < 0.0 ? tau - 1.0 : tau;
            }
            loss /= n;
            trajectory.push_back(loss);
            if (loss < best) {
                best = loss;
                best_phi = phi;
            }
            best_hist.push_back(best);

            const Eigen::VectorXd g = -(z.transpose() * psi) / n;
            const double gn = g.norm();
            if (gn == 0.0) {
                converged = true;
                break;
            }
            if (k > opts.window) {
                const double earlier = best_hist[best_hist.size() - 1 - static_cast<std::size_t>(opts.window)];
                if (earlier - best <= opts.tol * std::abs(best)) {
                    converged = true;
                    break;
                }
            }
            phi -= (step0 / std::sqrt(static_cast<double>(k))) * g / gn;
        }
        if (!converged) {
            throw ConvergenceError("quantile regression at tau=" + std::to_string(tau) +
                                       " did not converge",
                                   std::move(trajectory));
        }
        const Eigen::VectorXd theta = scaling.to_theta(best_phi);
        qm.thetas.emplace_back(theta.data(), theta.data() + theta.size());
    }
    qm.validate();
    return qm;
}

}  // namespace inertia
