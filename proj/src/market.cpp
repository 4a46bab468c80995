#include "inertia/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "inertia/errors.hpp"

namespace inertia {

InfeasibleRequirement::InfeasibleRequirement(double requirement, double capacity)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "reserve requirement " << requirement << " MW exceeds fleet capacity " << capacity
             << " MW";
          return os.str();
      }()),
      requirement_(requirement),
      capacity_(capacity) {}

namespace {

std::vector<std::size_t> merit_order(const FleetSpec& fleet, bool real_time) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < fleet.classes.size(); ++i) {
        if (!real_time || fleet.classes[i].rt_flexible) idx.push_back(i);
    }
    // stable: equal prices keep declaration order
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return real_time ? fleet.classes[a].price_rt < fleet.classes[b].price_rt
                         : fleet.classes[a].price_da < fleet.classes[b].price_da;
    });
    return idx;
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void FrequencyParams::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"dp_loss", dp_loss},   {"t_deliver", t_deliver}, {"df_nadir_max", df_nadir_max},
        {"df_ss_max", df_ss_max}, {"rocof_max", rocof_max}, {"damping", damping},
        {"demand", demand}};
    for (const auto& [name, value] : fields) {
        if (!positive_finite(value)) {
            throw ConfigError(std::string("frequency parameter ") + name + " must be > 0");
        }
    }
}

double FrequencyParams::nadir_constant() const {
    return dp_loss * dp_loss * t_deliver / (4.0 * df_nadir_max);
}

void FleetSpec::validate() const {
    if (classes.empty()) throw ConfigError("fleet has no unit classes");
    double max_rt = 0.0;
    for (const auto& c : classes) {
        if (c.count < 1) throw ConfigError("unit class '" + c.name + "': count must be >= 1");
        if (!positive_finite(c.capacity_each)) {
            throw ConfigError("unit class '" + c.name + "': capacity must be > 0");
        }
        if (!(c.price_da >= 0.0) || !(c.price_rt >= 0.0)) {
            throw ConfigError("unit class '" + c.name + "': prices must be >= 0");
        }
        max_rt = std::max(max_rt, c.price_rt);
    }
    if (!(penalty_price >= max_rt)) {
        throw ConfigError("penalty price must be >= every real-time price");
    }
}

double FleetSpec::total_capacity() const {
    return std::accumulate(classes.begin(), classes.end(), 0.0,
                           [](double acc, const UnitClass& c) { return acc + c.capacity(); });
}

FleetSpec FleetSpec::reference() {
    FleetSpec f;
    f.classes = {
        UnitClass{"CCGT", 100, 50.0, 47.0, 47.0, false},
        UnitClass{"OCGT", 30, 20.0, 200.0, 200.0, true},
    };
    f.penalty_price = 3000.0;
    return f;
}

double DispatchResult::da_total() const {
    return std::accumulate(da_schedule.begin(), da_schedule.end(), 0.0);
}

double DispatchResult::rt_total() const {
    return std::accumulate(rt_schedule.begin(), rt_schedule.end(), 0.0);
}

double reserve_from_inertia(double h, const FrequencyParams& fp, bool include_ss) {
    if (!(h > 0.0)) throw DomainError("inertia must be positive to evaluate the nadir rule");
    const double nadir = fp.nadir_constant() / h;
    if (!include_ss) return nadir;
    const double steady = fp.dp_loss - fp.damping * fp.demand * fp.df_ss_max;
    return std::max(nadir, steady);
}

double inertia_for_reserve(double reserve, const FrequencyParams& fp) {
    if (!(reserve > 0.0)) throw DomainError("reserve must be positive to invert the nadir rule");
    return fp.nadir_constant() / reserve;
}

bool check_rocof(double h, const FrequencyParams& fp) {
    if (!(h > 0.0)) throw DomainError("inertia must be positive to evaluate RoCoF");
    // dp/(2h) <= limit, rearranged to avoid the division
    return fp.dp_loss <= 2.0 * h * fp.rocof_max;
}

DispatchResult clear_day_ahead(double requirement, const FleetSpec& fleet) {
    if (!(requirement >= 0.0)) throw DomainError("day-ahead requirement must be >= 0");
    const double cap = fleet.total_capacity();
    if (requirement > cap) throw InfeasibleRequirement(requirement, cap);

    DispatchResult out;
    out.da_schedule.assign(fleet.classes.size(), 0.0);
    out.rt_schedule.assign(fleet.classes.size(), 0.0);
    double remaining = requirement;
    for (std::size_t i : merit_order(fleet, false)) {
        if (remaining <= 0.0) break;
        const auto& c = fleet.classes[i];
        const double take = std::min(remaining, c.capacity());
        out.da_schedule[i] = take;
        out.da_cost += c.price_da * take;
        remaining -= take;
    }
    out.total_cost = out.da_cost;
    return out;
}

DispatchResult clear_real_time(double realized_req, const DispatchResult& da,
                               const FleetSpec& fleet) {
    DispatchResult out = da;
    out.rt_schedule.assign(fleet.classes.size(), 0.0);
    out.rt_cost = 0.0;
    out.slack = 0.0;

    double remaining = std::max(0.0, realized_req - da.da_total());
    for (std::size_t i : merit_order(fleet, true)) {
        if (remaining <= 0.0) break;
        const auto& c = fleet.classes[i];
        const double headroom = std::max(0.0, c.capacity() - da.da_schedule[i]);
        const double take = std::min(remaining, headroom);
        out.rt_schedule[i] = take;
        out.rt_cost += c.price_rt * take;
        remaining -= take;
    }
    out.slack = std::max(0.0, remaining);
    out.total_cost = out.da_cost + out.rt_cost + out.slack * fleet.penalty_price;
    return out;
}

DispatchResult cost_for_procurement(double da_total, double realized_req, const FleetSpec& fleet) {
    const double r = std::clamp(da_total, 0.0, fleet.total_capacity());
    return clear_real_time(realized_req, clear_day_ahead(r, fleet), fleet);
}

DispatchResult total_cost(double h_forecast, double realized_req, const FleetSpec& fleet,
                          const FrequencyParams& fp) {
    const double r_hat = reserve_from_inertia(h_forecast, fp, false);
    return cost_for_procurement(r_hat, realized_req, fleet);
}

TwoStageCost::TwoStageCost(const FleetSpec& fleet) : penalty_(fleet.penalty_price) {
    const auto da_idx = merit_order(fleet, false);
    std::vector<std::size_t> position(fleet.classes.size());
    double cum = 0.0;
    for (std::size_t k = 0; k < da_idx.size(); ++k) {
        const auto& c = fleet.classes[da_idx[k]];
        da_order_.push_back(Entry{c.capacity(), c.price_da, c.price_rt, cum, c.rt_flexible});
        position[da_idx[k]] = k;
        cum += c.capacity();
    }
    capacity_ = cum;
    for (std::size_t i : merit_order(fleet, true)) rt_order_.push_back(position[i]);
}

TwoStageCost::Value TwoStageCost::evaluate(double r_hat, double realized_req) const {
    Value v;
    r_hat = std::clamp(r_hat, 0.0, capacity_);

    const Entry* marginal = nullptr;
    for (const auto& e : da_order_) {
        const double q = std::clamp(r_hat - e.cum_before, 0.0, e.cap);
        v.da_cost += e.price_da * q;
        if (!marginal && r_hat < e.cum_before + e.cap) marginal = &e;
    }

    v.shortfall = std::max(0.0, realized_req - r_hat);
    double remaining = v.shortfall;
    double rt_cost = 0.0;
    double pi = 0.0;
    for (std::size_t k : rt_order_) {
        if (remaining <= 0.0) break;
        const auto& e = da_order_[k];
        const double headroom = e.cap - std::clamp(r_hat - e.cum_before, 0.0, e.cap);
        const double take = std::min(remaining, headroom);
        if (take > 0.0) {
            rt_cost += e.price_rt * take;
            remaining -= take;
            pi = e.price_rt;
        }
    }
    const double slack = std::max(0.0, remaining);
    if (slack > 0.0) pi = penalty_;
    v.cost = v.da_cost + rt_cost + slack * penalty_;

    if (marginal) {
        v.slope = marginal->price_da - pi;
        if (marginal->flexible && pi > marginal->price_rt) v.slope += pi - marginal->price_rt;
    }
    return v;
}

}  // namespace inertia
