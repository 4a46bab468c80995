#include "inertia/risk.hpp"

#include <algorithm>
#include <cmath>

#include "inertia/errors.hpp"

namespace inertia {

namespace {

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
}

// Tail mass (1 - beta) * n, and the number of samples that may lie strictly
// above VaR. The small slack absorbs representation error such as
// (1 - 0.8) * 5 = 0.9999999999999998.
struct TailSize {
    double mass;
    std::size_t whole;
};

TailSize tail_size(std::size_t n, double beta) {
    const double mass = (1.0 - beta) * static_cast<double>(n);
    const double whole = std::floor(mass * (1.0 + 1e-12) + 1e-9);
    return {mass, static_cast<std::size_t>(std::min(whole, static_cast<double>(n)))};
}

double lower_order_statistic(std::span<const double> costs, const TailSize& tail) {
    std::vector<double> v(costs.begin(), costs.end());
    const std::size_t n = v.size();
    const std::size_t idx = tail.whole >= n ? 0 : n - 1 - tail.whole;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

}  // namespace

void RiskConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    check_beta(beta);
}

double beta_max(std::size_t n_samples) {
    if (n_samples == 0) throw ConfigError("beta_max needs at least one sample");
    return 1.0 - 1.0 / static_cast<double>(n_samples);
}

RiskResult var_cvar(std::span<const double> costs, double beta) {
    if (costs.empty()) throw DataError("var_cvar: empty cost sample");
    check_beta(beta);
    const auto tail = tail_size(costs.size(), beta);

    RiskResult r;
    r.var = lower_order_statistic(costs, tail);
    r.excesses.resize(costs.size());
    double sum = 0.0;
    for (std::size_t s = 0; s < costs.size(); ++s) {
        r.excesses[s] = std::max(0.0, costs[s] - r.var);
        sum += r.excesses[s];
    }
    r.cvar = r.var + sum / tail.mass;
    return r;
}

std::vector<double> cvar_weights(std::span<const double> costs, double beta) {
    if (costs.empty()) throw DataError("cvar_weights: empty cost sample");
    check_beta(beta);
    const auto tail = tail_size(costs.size(), beta);
    const double var = lower_order_statistic(costs, tail);

    std::size_t above = 0;
    std::size_t tied = 0;
    for (double c : costs) {
        if (c > var) ++above;
        else if (c == var) ++tied;
    }
    const double unit = 1.0 / tail.mass;
    const double boundary = std::max(0.0, tail.mass - static_cast<double>(above)) /
                            (tail.mass * static_cast<double>(tied));

    std::vector<double> w(costs.size(), 0.0);
    for (std::size_t s = 0; s < costs.size(); ++s) {
        if (costs[s] > var) w[s] = unit;
        else if (costs[s] == var) w[s] = boundary;
    }
    return w;
}

std::vector<double> cvar_subgradient(std::span<const double> costs,
                                     const std::vector<std::vector<double>>& dcosts_dtheta,
                                     double beta) {
    if (dcosts_dtheta.size() != costs.size()) {
        throw ConfigError("cvar_subgradient: one gradient per cost sample is required");
    }
    const auto w = cvar_weights(costs, beta);
    const std::size_t dim = dcosts_dtheta.front().size();
    std::vector<double> g(dim, 0.0);
    for (std::size_t s = 0; s < costs.size(); ++s) {
        if (w[s] == 0.0) continue;
        if (dcosts_dtheta[s].size() != dim) throw ConfigError("cvar_subgradient: ragged gradients");
        for (std::size_t j = 0; j < dim; ++j) g[j] += w[s] * dcosts_dtheta[s][j];
    }
    return g;
}

}  // namespace inertia
