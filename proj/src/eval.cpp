#include "inertia/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "inertia/baselines.hpp"
#include "inertia/config.hpp"
#include "inertia/errors.hpp"
#include "inertia/random.hpp"
#include "inertia/risk.hpp"

namespace inertia {

void EvalConfig::validate() const {
    if (!(beta_eval >= 0.0 && beta_eval < 1.0)) throw ConfigError("beta_eval must lie in [0, 1)");
    if (k_size < 1) throw ConfigError("k_size must be >= 1");
}

std::vector<std::vector<double>> perturbation_sets(const Dataset& test, const QuantileModel& qm,
                                                   const FrequencyParams& fp,
                                                   const EvalConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<double>> sets(test.size());
    for (std::size_t n = 0; n < test.size(); ++n) {
        const auto& x = test.scenarios[n].features;
        const auto u = latin_hypercube(cfg.k_size, 0.0, 1.0, derive_seed(cfg.seed, n));
        auto& reqs = sets[n];
        reqs.reserve(u.size());
        for (double p : u) reqs.push_back(reserve_from_inertia(qm.quantile(x, p), fp));
    }
    return sets;
}

EvalReport evaluate_schedules(std::span<const double> da_totals, std::span<const double> h_hat,
                              const Dataset& test, const FleetSpec& fleet,
                              const std::vector<std::vector<double>>& perturbations,
                              const EvalConfig& cfg) {
    cfg.validate();
    if (test.size() == 0) throw DataError("empty test set");
    if (da_totals.size() != test.size() || h_hat.size() != test.size() ||
        perturbations.size() != test.size()) {
        throw DataError("evaluation inputs do not match the test set size");
    }
    const TwoStageCost cost(fleet);
    EvalReport rep;
    rep.per_scenario.reserve(test.size());
    std::vector<double> draws;
    for (std::size_t n = 0; n < test.size(); ++n) {
        const auto& sc = test.scenarios[n];
        EvalRow row;
        row.timestamp = sc.timestamp;
        row.h_true = sc.inertia_true;
        row.h_hat = h_hat[n];
        row.da_total = std::clamp(da_totals[n], 0.0, cost.capacity());
        row.soc = cost.evaluate(row.da_total, sc.realized_req).cost;

        const auto& reqs = perturbations[n];
        if (reqs.empty()) throw DataError("empty perturbation set");
        draws.resize(reqs.size());
        double sum = 0.0;
        for (std::size_t k = 0; k < reqs.size(); ++k) {
            draws[k] = cost.evaluate(row.da_total, reqs[k]).cost;
            sum += draws[k];
        }
        row.soc_mean = sum / static_cast<double>(draws.size());
        const auto rr = var_cvar(draws, cfg.beta_eval);
        row.var = rr.var;
        row.cvar = rr.cvar;
        row.max_soc = *std::max_element(draws.begin(), draws.end());
        row.ape = std::abs(row.h_hat - row.h_true) / row.h_true * 100.0;

        rep.msoc += row.soc;
        rep.mcvar += row.cvar;
        rep.mmaxsoc += row.max_soc;
        rep.mape += row.ape;
        rep.per_scenario.push_back(std::move(row));
    }
    const auto n = static_cast<double>(test.size());
    rep.msoc /= n;
    rep.mcvar /= n;
    rep.mmaxsoc /= n;
    rep.mape /= n;
    return rep;
}

EvalReport evaluate(const ForecastModel& model, const Dataset& test, const FleetSpec& fleet,
                    const FrequencyParams& fp, const EvalConfig& cfg,
                    const std::vector<std::vector<double>>& perturbations) {
    model.validate();
    std::vector<double> h(test.size());
    std::vector<double> t(test.size());
    const double cap = fleet.total_capacity();
    for (std::size_t n = 0; n < test.size(); ++n) {
        h[n] = predict(model, test.scenarios[n].features);
        t[n] = std::min(reserve_from_inertia(h[n], fp), cap);
    }
    return evaluate_schedules(t, h, test, fleet, perturbations, cfg);
}

EvalReport evaluate(const ForecastModel& model, const Dataset& test, const FleetSpec& fleet,
                    const FrequencyParams& fp, const EvalConfig& cfg, const QuantileModel& qm) {
    return evaluate(model, test, fleet, fp, cfg, perturbation_sets(test, qm, fp, cfg));
}

double percent_gap(double a, double b) {
    if (b == 0.0) throw DomainError("percentage gap against a zero reference");
    return (a - b) / b * 100.0;
}

namespace {

struct Metric {
    const char* name;
    double EvalReport::*field;
};

constexpr Metric kMetrics[] = {
    {"msoc", &EvalReport::msoc},
    {"mcvar", &EvalReport::mcvar},
    {"mmaxsoc", &EvalReport::mmaxsoc},
    {"mape", &EvalReport::mape},
};

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

ComparisonTable compare(const std::vector<EvalReport>& reports) {
    if (reports.size() < 2) throw ConfigError("compare needs at least two reports");
    ComparisonTable t;
    for (const auto& r : reports) {
        EvalReport slim = r;
        slim.per_scenario.clear();
        t.reports.push_back(std::move(slim));
    }
    for (const auto& m : kMetrics) {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            for (std::size_t j = i + 1; j < reports.size(); ++j) {
                t.gaps.push_back({reports[i].label, reports[j].label, m.name,
                                  percent_gap(reports[i].*m.field, reports[j].*m.field)});
            }
        }
    }
    return t;
}

void ComparisonTable::write_csv(std::ostream& out) const {
    out << "kind,a,b,metric,value\n";
    for (const auto& r : reports) {
        for (const auto& m : kMetrics) {
            out << "value," << r.label << ",," << m.name << ',' << format_double(r.*m.field) << '\n';
        }
    }
    for (const auto& g : gaps) {
        out << "gap_percent," << g.a << ',' << g.b << ',' << g.metric << ','
            << format_double(g.percent) << '\n';
    }
}

void ComparisonTable::write_text(std::ostream& out) const {
    std::size_t w = 6;
    for (const auto& r : reports) w = std::max(w, r.label.size());
    auto pad = [](std::string s, std::size_t width) {
        if (s.size() < width) s.insert(0, width - s.size(), ' ');
        return s;
    };
    auto left = [](std::string s, std::size_t width) {
        if (s.size() < width) s.append(width - s.size(), ' ');
        return s;
    };
    out << left("model", w) << pad("MSOC", 14) << pad("MCVaR", 14) << pad("MMaxSOC", 14)
        << pad("MAPE %", 10) << '\n';
    for (const auto& r : reports) {
        out << left(r.label, w) << pad(fixed(r.msoc, 2), 14) << pad(fixed(r.mcvar, 2), 14)
            << pad(fixed(r.mmaxsoc, 2), 14) << pad(fixed(r.mape, 3), 10) << '\n';
    }
    out << '\n';
    std::size_t wp = 4;
    for (const auto& g : gaps) wp = std::max(wp, g.a.size() + g.b.size() + 4);
    out << left("pair", wp) << pad("metric", 9) << pad("gap %", 10) << '\n';
    for (const auto& g : gaps) {
        out << left(g.a + " vs " + g.b, wp) << pad(g.metric, 9) << pad(fixed(g.percent, 3), 10)
            << '\n';
    }
}

}  // namespace inertia
