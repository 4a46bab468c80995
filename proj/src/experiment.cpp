#include "inertia/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "inertia/errors.hpp"
#include "inertia/random.hpp"
#include "inertia/risk.hpp"

namespace inertia {

GeneratorConfig default_tail_high() {
    GeneratorConfig g;
    g.noise_dist = NoiseDistribution::student_t;
    g.tail_dof = 5;
    return g;
}

GeneratorConfig default_tail_low() {
    GeneratorConfig g;
    g.noise_dist = NoiseDistribution::uniform;
    return g;
}

namespace {

std::vector<std::size_t> to_counts(const std::vector<double>& v, const std::string& key) {
    std::vector<std::size_t> out;
    for (double d : v) {
        if (!(d >= 1.0) || d != std::floor(d)) throw ConfigError(key + ": counts must be integers >= 1");
        out.push_back(static_cast<std::size_t>(d));
    }
    return out;
}

void check_unit(const std::vector<double>& v, const std::string& key, bool closed_top) {
    if (v.empty()) throw ConfigError(key + ": grid must not be empty");
    for (double d : v) {
        const bool ok = closed_top ? (d >= 0.0 && d <= 1.0) : (d >= 0.0 && d < 1.0);
        if (!ok) throw ConfigError(key + ": value " + format_double(d) + " out of range");
    }
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

void put_generator(std::map<std::string, std::string>& m, const std::string& p,
                   const GeneratorConfig& g) {
    m[p + "inertia_min"] = format_double(g.inertia_min);
    m[p + "inertia_max"] = format_double(g.inertia_max);
    m[p + "noise_scale"] = format_double(g.noise_scale);
    m[p + "hetero_gain"] = format_double(g.hetero_gain);
    m[p + "n_features"] = std::to_string(g.n_features);
    m[p + "noise_dist"] = to_string(g.noise_dist);
    m[p + "noise_trunc"] = format_double(g.noise_trunc);
    m[p + "tail_dof"] = std::to_string(g.tail_dof);
    m[p + "seed"] = std::to_string(g.seed);
    m[p + "test_count"] = std::to_string(g.test_count);
    m[p + "start"] = g.start;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void ExperimentConfig::validate() const {
    fp.validate();
    fleet.validate();
    generator.validate();
    train.validate();
    eval.validate();
    tail_high.validate();
    tail_low.validate();
    if (n_scenarios < 2 || tail_n_scenarios < 2) throw ConfigError("n_scenarios must be >= 2");
    check_unit(sweep_alphas, "sweep.alphas", true);
    check_unit(sweep_betas, "sweep.betas", false);
    check_unit(ro_betas, "ro.betas", false);
    if (ro_lambdas.empty()) throw ConfigError("ro.lambdas: grid must not be empty");
    for (double l : ro_lambdas) {
        if (!(l > 0.0 && l < 1.0)) throw ConfigError("ro.lambdas: values must lie in (0, 1)");
    }
    if (sp_scenarios.empty()) throw ConfigError("sp.scenarios: grid must not be empty");
    if (!(sp_lambda > 0.0 && sp_lambda < 1.0)) throw ConfigError("sp.lambda must lie in (0, 1)");
    if (!(timing_min_seconds > 0.0)) throw ConfigError("sp.timing_min_seconds must be > 0");
    if (quantile.max_iters < 1 || quantile.window < 1 || !(quantile.tol > 0.0) ||
        !(quantile.step0 > 0.0)) {
        throw ConfigError("invalid [quantile] settings");
    }
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& kv) {
    ExperimentConfig c;

    if (auto s = kv.get("seed")) {
        const auto v = parse_double(*s);
        if (!v || *v < 0.0 || *v != std::floor(*v)) throw ConfigError("seed must be a non-negative integer");
        const auto base = static_cast<std::uint64_t>(*v);
        c.generator.seed = base;
        c.train.seed = derive_seed(base, 1);
        c.eval.seed = derive_seed(base, 2);
        c.sp_seed = derive_seed(base, 3);
        c.tail_high.seed = derive_seed(base, 4);
        c.tail_low.seed = derive_seed(base, 5);
    }

    c.data = kv.get_string("paths.data", c.data.string());
    c.results = kv.get_string("paths.results", c.results.string());

    c.n_scenarios = static_cast<std::size_t>(kv.get_int("data.n_scenarios", static_cast<long long>(c.n_scenarios)));
    c.generator = GeneratorConfig::from_config(kv, c.generator, "data.");

    auto& f = c.fp;
    f.dp_loss = kv.get_double("frequency.dp_loss", f.dp_loss);
    f.t_deliver = kv.get_double("frequency.t_deliver", f.t_deliver);
    f.df_nadir_max = kv.get_double("frequency.df_nadir_max", f.df_nadir_max);
    f.df_ss_max = kv.get_double("frequency.df_ss_max", f.df_ss_max);
    f.rocof_max = kv.get_double("frequency.rocof_max", f.rocof_max);
    f.damping = kv.get_double("frequency.damping", f.damping);
    f.demand = kv.get_double("frequency.demand", f.demand);

    c.fleet.penalty_price = kv.get_double("fleet.penalty_price", c.fleet.penalty_price);
    std::vector<UnitClass> classes;
    for (const auto& [key, value] : kv.values()) {
        const std::string prefix = "fleet.class.";
        if (key.compare(0, prefix.size(), prefix) != 0) continue;
        const auto v = parse_double_list(*kv.get(key));
        if (v.size() != 5) {
            throw ConfigError(key + ": expected count, capacity_each, price_da, price_rt, flexible");
        }
        UnitClass u;
        u.name = key.substr(prefix.size());
        u.count = static_cast<int>(v[0]);
        u.capacity_each = v[1];
        u.price_da = v[2];
        u.price_rt = v[3];
        u.rt_flexible = v[4] != 0.0;
        if (u.count < 1 || static_cast<double>(u.count) != v[0]) throw ConfigError(key + ": count must be a positive integer");
        classes.push_back(u);
    }
    if (!classes.empty()) c.fleet.classes = std::move(classes);

    auto& t = c.train;
    t.risk.alpha = kv.get_double("train.alpha", t.risk.alpha);
    t.risk.beta = kv.get_double("train.beta", t.risk.beta);
    t.restarts = static_cast<int>(kv.get_int("train.restarts", t.restarts));
    t.max_iters = static_cast<int>(kv.get_int("train.max_iters", t.max_iters));
    t.step0 = kv.get_double("train.step0", t.step0);
    t.tol = kv.get_double("train.tol", t.tol);
    t.window = static_cast<int>(kv.get_int("train.window", t.window));
    t.perturb = kv.get_double("train.perturb", t.perturb);
    t.warm_beta = kv.get_double("train.warm_beta", t.warm_beta);
    t.seed = static_cast<std::uint64_t>(kv.get_int("train.seed", static_cast<long long>(t.seed)));

    c.eval.beta_eval = kv.get_double("eval.beta", c.eval.beta_eval);
    const auto k_size = kv.get_int("eval.k_size", static_cast<long long>(c.eval.k_size));
    if (k_size < 1) throw ConfigError("eval.k_size must be >= 1");
    c.eval.k_size = static_cast<std::size_t>(k_size);
    c.eval.seed = static_cast<std::uint64_t>(kv.get_int("eval.seed", static_cast<long long>(c.eval.seed)));

    c.quantile.max_iters = static_cast<int>(kv.get_int("quantile.max_iters", c.quantile.max_iters));
    c.quantile.step0 = kv.get_double("quantile.step0", c.quantile.step0);
    c.quantile.tol = kv.get_double("quantile.tol", c.quantile.tol);
    c.quantile.window = static_cast<int>(kv.get_int("quantile.window", c.quantile.window));

    c.sweep_alphas = kv.get_doubles("sweep.alphas", c.sweep_alphas);
    c.sweep_betas = kv.get_doubles("sweep.betas", c.sweep_betas);

    if (kv.contains("sp.scenarios")) {
        c.sp_scenarios = to_counts(kv.get_doubles("sp.scenarios", {}), "sp.scenarios");
    }
    c.sp_lambda = kv.get_double("sp.lambda", c.sp_lambda);
    c.sp_seed = static_cast<std::uint64_t>(kv.get_int("sp.seed", static_cast<long long>(c.sp_seed)));
    c.timing_min_seconds = kv.get_double("sp.timing_min_seconds", c.timing_min_seconds);

    c.ro_lambdas = kv.get_doubles("ro.lambdas", c.ro_lambdas);
    c.ro_betas = kv.get_doubles("ro.betas", c.ro_betas);
    c.ro_include_beta_max = kv.get_bool("ro.include_beta_max", c.ro_include_beta_max);

    c.tail_n_scenarios = static_cast<std::size_t>(
        kv.get_int("tail.n_scenarios", static_cast<long long>(c.tail_n_scenarios)));
    c.tail_high = GeneratorConfig::from_config(kv, c.tail_high, "tail.high.");
    c.tail_low = GeneratorConfig::from_config(kv, c.tail_low, "tail.low.");

    if (auto unused = kv.unused_keys(); !unused.empty()) {
        throw ConfigError("unknown config key '" + unused.front() + "'");
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    return from_config(KeyValueConfig::load(path));
}

std::string ExperimentConfig::canonical() const {
    std::map<std::string, std::string> m;
    m["paths.data"] = data.generic_string();
    m["data.n_scenarios"] = std::to_string(n_scenarios);
    put_generator(m, "data.", generator);
    m["frequency.dp_loss"] = format_double(fp.dp_loss);
    m["frequency.t_deliver"] = format_double(fp.t_deliver);
    m["frequency.df_nadir_max"] = format_double(fp.df_nadir_max);
    m["frequency.df_ss_max"] = format_double(fp.df_ss_max);
    m["frequency.rocof_max"] = format_double(fp.rocof_max);
    m["frequency.damping"] = format_double(fp.damping);
    m["frequency.demand"] = format_double(fp.demand);
    m["fleet.penalty_price"] = format_double(fleet.penalty_price);
    for (const auto& u : fleet.classes) {
        m["fleet.class." + u.name] = std::to_string(u.count) + "," + format_double(u.capacity_each) +
                                     "," + format_double(u.price_da) + "," +
                                     format_double(u.price_rt) + "," + (u.rt_flexible ? "1" : "0");
    }
    m["train.alpha"] = format_double(train.risk.alpha);
    m["train.beta"] = format_double(train.risk.beta);
    m["train.restarts"] = std::to_string(train.restarts);
    m["train.max_iters"] = std::to_string(train.max_iters);
    m["train.step0"] = format_double(train.step0);
    m["train.tol"] = format_double(train.tol);
    m["train.window"] = std::to_string(train.window);
    m["train.perturb"] = format_double(train.perturb);
    m["train.warm_beta"] = format_double(train.warm_beta);
    m["train.seed"] = std::to_string(train.seed);
    m["eval.beta"] = format_double(eval.beta_eval);
    m["eval.k_size"] = std::to_string(eval.k_size);
    m["eval.seed"] = std::to_string(eval.seed);
    m["quantile.max_iters"] = std::to_string(quantile.max_iters);
    m["quantile.step0"] = format_double(quantile.step0);
    m["quantile.tol"] = format_double(quantile.tol);
    m["quantile.window"] = std::to_string(quantile.window);
    m["sweep.alphas"] = join(sweep_alphas);
    m["sweep.betas"] = join(sweep_betas);
    std::vector<double> counts(sp_scenarios.begin(), sp_scenarios.end());
    m["sp.scenarios"] = join(counts);
    m["sp.lambda"] = format_double(sp_lambda);
    m["sp.seed"] = std::to_string(sp_seed);
    m["ro.lambdas"] = join(ro_lambdas);
    m["ro.betas"] = join(ro_betas);
    m["ro.include_beta_max"] = ro_include_beta_max ? "true" : "false";
    m["tail.n_scenarios"] = std::to_string(tail_n_scenarios);
    put_generator(m, "tail.high.", tail_high);
    put_generator(m, "tail.low.", tail_low);

    std::string out;
    for (const auto& [k, v] : m) out += k + " = " + v + "\n";
    return out;
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Benchmark prepare_benchmark(const Dataset& data, const ExperimentConfig& cfg) {
    Benchmark b;
    b.train = data.subset(Split::train);
    b.test = data.subset(Split::test);
    if (b.train.size() == 0 || b.test.size() == 0) {
        throw DataError("benchmark needs non-empty train and test splits");
    }
    b.qm = fit_quantile(b.train, default_quantile_levels(), default_h_floor(cfg.fp, cfg.fleet),
                        cfg.quantile);
    b.perturbations = perturbation_sets(b.test, b.qm, cfg.fp, cfg.eval);
    return b;
}

EvalReport evaluate_model(const ForecastModel& model, const Benchmark& b,
                          const ExperimentConfig& cfg, const std::string& label) {
    auto r = evaluate(model, b.test, cfg.fleet, cfg.fp, cfg.eval, b.perturbations);
    r.label = label;
    return r;
}

TrainReport train_with(const Benchmark& b, const ExperimentConfig& cfg, double alpha, double beta) {
    TrainConfig tc = cfg.train;
    tc.risk = {alpha, beta};
    return train_raobf(b.train, cfg.fleet, cfg.fp, tc);
}

std::vector<SweepRow> run_sweep(const Benchmark& b, const ExperimentConfig& cfg) {
    auto alphas = cfg.sweep_alphas;
    std::sort(alphas.begin(), alphas.end());
    std::vector<SweepRow> rows;
    std::optional<SweepRow> alpha0;  // the alpha = 0 objective ignores beta
    for (double beta : cfg.sweep_betas) {
        for (double alpha : alphas) {
            SweepRow row;
            if (alpha == 0.0 && alpha0) {
                row = *alpha0;
            } else {
                const auto tr = train_with(b, cfg, alpha, beta);
                row.objective = tr.objective;
                row.report = evaluate_model(tr.model, b, cfg, "raobf");
                if (alpha == 0.0) alpha0 = row;
            }
            row.alpha = alpha;
            row.beta = beta;
            row.report.label = "raobf_a" + format_double(alpha) + "_b" + format_double(beta);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& config_hash,
                     std::ostream& out) {
    out << "config_hash,alpha,beta,objective,msoc,mcvar,mmaxsoc,mape\n";
    for (const auto& r : rows) {
        out << config_hash << ',' << format_double(r.alpha) << ',' << format_double(r.beta) << ','
            << format_double(r.objective) << ',' << format_double(r.report.msoc) << ','
            << format_double(r.report.mcvar) << ',' << format_double(r.report.mmaxsoc) << ','
            << format_double(r.report.mape) << '\n';
    }
}

void write_sweep_svg(const std::vector<SweepRow>& rows, std::ostream& out) {
    // One panel per metric, MSOC and MMaxSOC against alpha, one line per beta.
    const double w = 420.0;
    const double h = 260.0;
    const double pad = 40.0;
    struct Panel {
        const char* title;
        double EvalReport::*field;
    };
    const Panel panels[] = {{"MSOC", &EvalReport::msoc}, {"MMaxSOC", &EvalReport::mmaxsoc}};
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::map<double, std::vector<const SweepRow*>> by_beta;
    for (const auto& r : rows) by_beta[r.beta].push_back(&r);

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n",
                  2 * w, h);
    out << buf;
    for (int p = 0; p < 2; ++p) {
        const double x0 = p * w;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& r : rows) {
            lo = std::min(lo, r.report.*panels[p].field);
            hi = std::max(hi, r.report.*panels[p].field);
        }
        if (!(hi > lo)) hi = lo + 1.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"20\" font-size=\"14\">%s vs alpha</text>\n", x0 + pad,
                      panels[p].title);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                      "stroke=\"#888\"/>\n",
                      x0 + pad, pad, w - 2 * pad, h - 2 * pad);
        out << buf;
        int line = 0;
        for (const auto& [beta, pts] : by_beta) {
            out << "<polyline fill=\"none\" stroke=\"" << colors[line % 6] << "\" points=\"";
            for (const auto* r : pts) {
                const double px = x0 + pad + r->alpha * (w - 2 * pad);
                const double py = h - pad - (r->report.*panels[p].field - lo) / (hi - lo) * (h - 2 * pad);
                std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px, py);
                out << buf;
            }
            out << "\"/>\n";
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" fill=\"%s\">beta=%s</text>\n",
                          x0 + w - pad - 70, pad + 14.0 * (line + 1), colors[line % 6],
                          format_double(beta).c_str());
            out << buf;
            ++line;
        }
    }
    out << "</svg>\n";
}

std::vector<double> sp_schedules(const Benchmark& b, const ExperimentConfig& cfg,
                                 std::size_t n_scen) {
    std::vector<double> t(b.test.size());
    const auto stream = derive_seed(cfg.sp_seed, n_scen);
    for (std::size_t n = 0; n < b.test.size(); ++n) {
        const auto scen = build_scenario_set(b.qm, b.test.scenarios[n].features, n_scen,
                                             cfg.sp_lambda, derive_seed(stream, n), cfg.fp);
        t[n] = solve_sp(scen, cfg.fleet).da_total;
    }
    return t;
}

std::vector<double> ro_schedules(const Benchmark& b, const ExperimentConfig& cfg, double lambda) {
    std::vector<double> t(b.test.size());
    for (std::size_t n = 0; n < b.test.size(); ++n) {
        const auto u = uncertainty_set(b.qm, b.test.scenarios[n].features, lambda);
        t[n] = solve_ro(u, cfg.fleet, cfg.fp).da_total;
    }
    return t;
}

EvalReport evaluate_totals(const std::vector<double>& totals, const Benchmark& b,
                           const ExperimentConfig& cfg, const std::string& label) {
    std::vector<double> h(totals.size());
    for (std::size_t n = 0; n < totals.size(); ++n) {
        h[n] = totals[n] > 0.0 ? inertia_for_reserve(totals[n], cfg.fp)
                               : std::numeric_limits<double>::infinity();
    }
    auto r = evaluate_schedules(totals, h, b.test, cfg.fleet, b.perturbations, cfg.eval);
    r.label = label;
    return r;
}

namespace {

template <typename Body>
Timing time_loop(std::size_t instances, double min_seconds, Body&& body) {
    Timing t;
    const auto t0 = std::chrono::steady_clock::now();
    double elapsed = 0.0;
    do {
        body();
        ++t.repetitions;
        elapsed = seconds_since(t0);
    } while (elapsed < min_seconds);
    t.seconds_per_instance = elapsed / static_cast<double>(t.repetitions * instances);
    return t;
}

}  // namespace

Timing time_forecast_pipeline(const ForecastModel& model, const Benchmark& b,
                              const ExperimentConfig& cfg) {
    const double cap = cfg.fleet.total_capacity();
    volatile double sink = 0.0;
    return time_loop(b.test.size(), cfg.timing_min_seconds, [&] {
        double acc = 0.0;
        for (const auto& s : b.test.scenarios) {
            const double h = predict(model, s.features);
            acc += clear_day_ahead(std::min(reserve_from_inertia(h, cfg.fp), cap), cfg.fleet).da_cost;
        }
        sink = sink + acc;
    });
}

Timing time_sp_pipeline(const Benchmark& b, const ExperimentConfig& cfg, std::size_t n_scen) {
    volatile double sink = 0.0;
    return time_loop(b.test.size(), cfg.timing_min_seconds, [&] {
        double acc = 0.0;
        for (const double t : sp_schedules(b, cfg, n_scen)) acc += t;
        sink = sink + acc;
    });
}

SpComparison run_compare_sp(const Benchmark& b, const ExperimentConfig& cfg,
                            const ForecastModel& raobf_alpha0) {
    SpComparison c;
    c.raobf = evaluate_model(raobf_alpha0, b, cfg, "raobf_a0");
    for (std::size_t n : cfg.sp_scenarios) {
        SpRow row;
        row.n_scen = n;
        row.report = evaluate_totals(sp_schedules(b, cfg, n), b, cfg, "pf_sp_" + std::to_string(n));
        row.gap_msoc = percent_gap(c.raobf.msoc, row.report.msoc);
        row.gap_mcvar = percent_gap(c.raobf.mcvar, row.report.mcvar);
        row.gap_mmaxsoc = percent_gap(c.raobf.mmaxsoc, row.report.mmaxsoc);
        c.rows.push_back(std::move(row));
    }
    return c;
}

void write_sp_csv(const SpComparison& c, const std::string& config_hash, std::ostream& out) {
    out << "config_hash,n_scen,sp_msoc,sp_mcvar,sp_mmaxsoc,sp_mape,raobf_msoc,raobf_mcvar,"
           "raobf_mmaxsoc,raobf_mape,gap_msoc,gap_mcvar,gap_mmaxsoc\n";
    for (const auto& r : c.rows) {
        out << config_hash << ',' << r.n_scen << ',' << format_double(r.report.msoc) << ','
            << format_double(r.report.mcvar) << ',' << format_double(r.report.mmaxsoc) << ','
            << format_double(r.report.mape) << ',' << format_double(c.raobf.msoc) << ','
            << format_double(c.raobf.mcvar) << ',' << format_double(c.raobf.mmaxsoc) << ','
            << format_double(c.raobf.mape) << ',' << format_double(r.gap_msoc) << ','
            << format_double(r.gap_mcvar) << ',' << format_double(r.gap_mmaxsoc) << '\n';
    }
}

std::vector<double> ro_beta_grid(const ExperimentConfig& cfg, std::size_t n_train) {
    auto betas = cfg.ro_betas;
    std::sort(betas.begin(), betas.end());
    if (cfg.ro_include_beta_max) {
        const double bmax = beta_max(n_train);
        betas.erase(std::remove_if(betas.begin(), betas.end(), [&](double x) { return x >= bmax; }),
                    betas.end());
        betas.push_back(bmax);
    }
    return betas;
}

RoComparison run_compare_ro(const Benchmark& b, const ExperimentConfig& cfg) {
    RoComparison c;
    c.betas = ro_beta_grid(cfg, b.train.size());
    const double bmax = beta_max(b.train.size());
    for (double beta : c.betas) {
        const auto tr = train_with(b, cfg, 1.0, beta);
        c.raobf.push_back(evaluate_model(tr.model, b, cfg, "raobf_a1_b" + format_double(beta)));
    }
    for (double lambda : cfg.ro_lambdas) {
        c.ro.push_back(evaluate_totals(ro_schedules(b, cfg, lambda), b, cfg,
                                       "pf_ro_" + format_double(lambda)));
        const auto& ro = c.ro.back();
        for (std::size_t k = 0; k < c.betas.size(); ++k) {
            RoRow row;
            row.lambda = lambda;
            row.beta = c.betas[k];
            row.beta_is_max = cfg.ro_include_beta_max && c.betas[k] == bmax;
            row.gap_msoc = percent_gap(c.raobf[k].msoc, ro.msoc);
            row.gap_mcvar = percent_gap(c.raobf[k].mcvar, ro.mcvar);
            row.gap_mmaxsoc = percent_gap(c.raobf[k].mmaxsoc, ro.mmaxsoc);
            c.rows.push_back(row);
        }
    }
    return c;
}

void write_ro_csv(const RoComparison& c, const std::string& config_hash, std::ostream& out) {
    out << "config_hash,lambda,beta,beta_is_max,ro_msoc,ro_mcvar,ro_mmaxsoc,raobf_msoc,raobf_mcvar,"
           "raobf_mmaxsoc,gap_msoc,gap_mcvar,gap_mmaxsoc\n";
    std::size_t i = 0;
    for (std::size_t l = 0; l < c.ro.size(); ++l) {
        for (std::size_t k = 0; k < c.betas.size(); ++k, ++i) {
            const auto& row = c.rows[i];
            out << config_hash << ',' << format_double(row.lambda) << ',' << format_double(row.beta)
                << ',' << (row.beta_is_max ? 1 : 0) << ',' << format_double(c.ro[l].msoc) << ','
                << format_double(c.ro[l].mcvar) << ',' << format_double(c.ro[l].mmaxsoc) << ','
                << format_double(c.raobf[k].msoc) << ',' << format_double(c.raobf[k].mcvar) << ','
                << format_double(c.raobf[k].mmaxsoc) << ',' << format_double(row.gap_msoc) << ','
                << format_double(row.gap_mcvar) << ',' << format_double(row.gap_mmaxsoc) << '\n';
        }
    }
}

namespace {

// Excess kurtosis of the relative least-squares residuals.
double residual_kurtosis(const Dataset& train, const ExperimentConfig& cfg) {
    const auto m = fit_mse(train, default_h_floor(cfg.fp, cfg.fleet));
    std::vector<double> e;
    e.reserve(train.size());
    for (const auto& s : train.scenarios) {
        const double f = linear_score(m.theta, s.features);
        e.push_back((s.inertia_true - f) / f);
    }
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(e.size());
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : e) {
        const double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= static_cast<double>(e.size());
    m4 /= static_cast<double>(e.size());
    return m4 / (m2 * m2) - 3.0;
}

}  // namespace

std::vector<TailRow> run_tail_effect(const ExperimentConfig& cfg) {
    std::vector<TailRow> rows;
    const double lambda = *std::max_element(cfg.ro_lambdas.begin(), cfg.ro_lambdas.end());
    const std::pair<const char*, const GeneratorConfig*> cases[] = {{"high_tail", &cfg.tail_high},
                                                                   {"low_tail", &cfg.tail_low}};
    for (const auto& [label, gen] : cases) {
        const auto data = generate_synthetic(cfg.tail_n_scenarios, gen->seed, *gen, cfg.fp);
        const auto b = prepare_benchmark(data, cfg);
        const double kurt = residual_kurtosis(b.train, cfg);
        const auto ro = evaluate_totals(ro_schedules(b, cfg, lambda), b, cfg, "pf_ro");
        const auto betas = ro_beta_grid(cfg, b.train.size());
        const double bmax = beta_max(b.train.size());
        for (double beta : betas) {
            const auto tr = train_with(b, cfg, 1.0, beta);
            const auto rep = evaluate_model(tr.model, b, cfg, "raobf");
            TailRow row;
            row.label = label;
            row.beta = beta;
            row.beta_is_max = cfg.ro_include_beta_max && beta == bmax;
            row.kurtosis = kurt;
            row.gap_mmaxsoc = percent_gap(rep.mmaxsoc, ro.mmaxsoc);
            row.gap_msoc = percent_gap(rep.msoc, ro.msoc);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_tail_csv(const std::vector<TailRow>& rows, const std::string& config_hash,
                    std::ostream& out) {
    out << "config_hash,case,beta,beta_is_max,excess_kurtosis,gap_mmaxsoc,gap_msoc\n";
    for (const auto& r : rows) {
        out << config_hash << ',' << r.label << ',' << format_double(r.beta) << ','
            << (r.beta_is_max ? 1 : 0) << ',' << format_double(r.kurtosis) << ','
            << format_double(r.gap_mmaxsoc) << ',' << format_double(r.gap_msoc) << '\n';
    }
}

}  // namespace inertia
