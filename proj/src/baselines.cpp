#include "inertia/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "inertia/errors.hpp"
#include "inertia/random.hpp"

namespace inertia {

void ScenarioSet::validate() const {
    if (requirements.empty()) throw ConfigError("scenario set is empty");
    if (requirements.size() != probabilities.size()) {
        throw ConfigError("scenario set: requirements and probabilities differ in length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < requirements.size(); ++i) {
        if (!std::isfinite(requirements[i]) || requirements[i] < 0.0) {
            throw ConfigError("scenario set: requirement must be finite and >= 0");
        }
        if (!(probabilities[i] >= 0.0)) throw ConfigError("scenario set: negative probability");
        sum += probabilities[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("scenario set: probabilities do not sum to 1");
}

void UncertaintySet::validate() const {
    if (!(h_low > 0.0) || !(h_low <= h_high) || !std::isfinite(h_high)) {
        throw ConfigError("uncertainty set needs 0 < h_low <= h_high");
    }
}

std::vector<double> latin_hypercube(std::size_t n, double lo, double hi, std::uint64_t seed) {
    if (n == 0) throw ConfigError("latin hypercube needs at least one bin");
    Rng rng(seed);
    std::vector<double> u(n);
    const double width = (hi - lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = lo + width * (static_cast<double>(i) + rng.uniform());
    }
    return u;
}

ScenarioSet build_scenario_set(const QuantileModel& qm, std::span<const double> x,
                               std::size_t n_scen, double lambda, std::uint64_t seed,
                               const FrequencyParams& fp) {
    if (n_scen == 0) throw ConfigError("n_scen must be >= 1");
    if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in (0, 1)");
    const auto p = latin_hypercube(n_scen, 0.5 * (1.0 - lambda), 0.5 * (1.0 + lambda), seed);
    ScenarioSet s;
    s.requirements.reserve(n_scen);
    for (double pk : p) s.requirements.push_back(reserve_from_inertia(qm.quantile(x, pk), fp));
    s.probabilities.assign(n_scen, 1.0 / static_cast<double>(n_scen));
    return s;
}

double expected_cost(double da_total, const ScenarioSet& scen, const FleetSpec& fleet) {
    const TwoStageCost cost(fleet);
    double e = 0.0;
    for (std::size_t h = 0; h < scen.requirements.size(); ++h) {
        e += scen.probabilities[h] * cost.evaluate(da_total, scen.requirements[h]).cost;
    }
    return e;
}

namespace {

struct Piece {
    double begin;
    double end;
    std::size_t index;  // class index in the fleet
};

}  // namespace

StageDecision solve_sp(const ScenarioSet& scen, const FleetSpec& fleet) {
    scen.validate();
    fleet.validate();
    const double cap = fleet.total_capacity();

    // Day-ahead merit order (stable on price, as in clear_day_ahead).
    std::vector<std::size_t> da(fleet.classes.size());
    std::iota(da.begin(), da.end(), 0);
    std::stable_sort(da.begin(), da.end(), [&](std::size_t a, std::size_t b) {
        return fleet.classes[a].price_da < fleet.classes[b].price_da;
    });
    std::vector<std::size_t> rt;
    for (std::size_t i : da) {
        if (fleet.classes[i].rt_flexible) rt.push_back(i);
    }
    std::stable_sort(rt.begin(), rt.end(), [&](std::size_t a, std::size_t b) {
        return fleet.classes[a].price_rt < fleet.classes[b].price_rt;
    });

    std::vector<Piece> pieces;
    std::vector<double> cand = {0.0, cap};
    double cum = 0.0;
    for (std::size_t k = 0; k < da.size(); ++k) {
        const double c = fleet.classes[da[k]].capacity();
        pieces.push_back({cum, cum + c, da[k]});
        cum += c;
        cand.push_back(cum);
    }

    // Real-time headroom of class j when t sits at the start of piece p.
    auto headroom_at = [&](std::size_t j, const Piece& p) {
        for (const auto& q : pieces) {
            if (q.index == j) return q.end <= p.begin ? 0.0 : fleet.classes[j].capacity();
        }
        return 0.0;
    };

    for (double r : scen.requirements) {
        cand.push_back(r);
        for (const auto& p : pieces) {
            // Prefix sums of real-time headroom whose size does not move with t
            // inside this piece give a kink at t = r - prefix.
            double prefix = 0.0;
            for (std::size_t j : rt) {
                if (j == p.index) break;  // later prefixes move with t: parallel, no kink
                prefix += headroom_at(j, p);
                const double t = r - prefix;
                if (t >= p.begin && t <= p.end) cand.push_back(t);
            }
        }
    }
    for (double& t : cand) t = std::clamp(t, 0.0, cap);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    StageDecision best{0.0, std::numeric_limits<double>::infinity()};
    for (double t : cand) {
        const double e = expected_cost(t, scen, fleet);
        if (!std::isfinite(best.cost) || e < best.cost - 1e-9 * std::max(1.0, std::abs(best.cost))) {
            best = {t, e};
        }
    }
    return best;
}

UncertaintySet uncertainty_set(const QuantileModel& qm, std::span<const double> x, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in (0, 1)");
    UncertaintySet u;
    u.lambda = lambda;
    u.h_low = qm.quantile(x, 1.0 - lambda);
    u.h_high = std::max(u.h_low, qm.quantile(x, 0.5));
    return u;
}

StageDecision solve_ro(const UncertaintySet& uset, const FleetSpec& fleet,
                       const FrequencyParams& fp) {
    uset.validate();
    const double worst = std::min(reserve_from_inertia(uset.h_low, fp), fleet.total_capacity());
    return solve_sp(ScenarioSet{{worst}, {1.0}}, fleet);
}

double sp_forecast_equivalent(const ScenarioSet& scen, const FleetSpec& fleet,
                              const FrequencyParams& fp) {
    const auto d = solve_sp(scen, fleet);
    if (!(d.da_total > 0.0)) {
        throw DomainError("stochastic program procures nothing day-ahead; no inertia equivalent");
    }
    return inertia_for_reserve(d.da_total, fp);
}

}  // namespace inertia
