// Command-line driver: data generation, training, evaluation and the
// baseline comparisons. See docs/cli.md for the file formats.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inertia/data.hpp"
#include "inertia/errors.hpp"
#include "inertia/experiment.hpp"
#include "inertia/io.hpp"
#include "inertia/risk.hpp"

namespace fs = std::filesystem;
using namespace inertia;
using nlohmann::json;

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::string data;
    std::string results;
    std::string seed;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Run {
public:
    Run(const Common& common, const std::vector<std::pair<std::string, std::string>>& overrides)
        : started_(std::chrono::steady_clock::now()) {
        KeyValueConfig kv;
        if (!common.config_path.empty()) kv = KeyValueConfig::load(common.config_path);
        for (const auto& s : common.sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
            kv.set(s.substr(0, eq), s.substr(eq + 1));
        }
        if (!common.data.empty()) kv.set("paths.data", common.data);
        if (!common.results.empty()) kv.set("paths.results", common.results);
        if (!common.seed.empty()) kv.set("seed", common.seed);
        for (const auto& [k, v] : overrides) kv.set(k, v);
        cfg = ExperimentConfig::from_config(kv);
        hash = cfg.hash();
    }

    fs::path result_path(const std::string& name) const {
        fs::create_directories(cfg.results);
        return cfg.results / name;
    }

    Dataset load_data() const {
        return load_csv(cfg.data, cfg.fp, cfg.generator.test_count);
    }

    // Timestamps, wall-clock and timings go here, never into result files.
    void write_meta(const std::string& command, json extra = json::object()) const {
        extra["command"] = command;
        extra["config_hash"] = hash;
        extra["created_utc"] = utc_now();
        extra["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        write_json(extra, result_path(command + ".meta.json"));
    }

    ExperimentConfig cfg;
    std::string hash;

private:
    std::chrono::steady_clock::time_point started_;
};

template <typename T>
void write_text_file(const fs::path& path, const T& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    writer(out);
    if (!out) throw DataError("write failed for " + path.string());
}

using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_if(Overrides& o, const std::string& key, const std::string& value) {
    if (!value.empty()) o.emplace_back(key, value);
}

void print_summary(const Dataset& d) {
    double lo = d.scenarios.front().inertia_true;
    double hi = lo;
    double sum = 0.0;
    for (const auto& s : d.scenarios) {
        lo = std::min(lo, s.inertia_true);
        hi = std::max(hi, s.inertia_true);
        sum += s.inertia_true;
    }
    const auto test = d.subset(Split::test).size();
    std::printf("scenarios %zu (train %zu, test %zu), features %zu\n", d.size(), d.size() - test,
                test, d.dim());
    std::printf("inertia MW*s: min %.1f  mean %.1f  max %.1f\n", lo, sum / static_cast<double>(d.size()),
                hi);
    std::printf("first %s  last %s\n", d.scenarios.front().timestamp.c_str(),
                d.scenarios.back().timestamp.c_str());
}

void print_report(const EvalReport& r) {
    std::printf("%-24s MSOC %12.2f  MCVaR %12.2f  MMaxSOC %12.2f  MAPE %7.3f%%\n", r.label.c_str(),
                r.msoc, r.mcvar, r.mmaxsoc, r.mape);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-aware inertia forecasting for reserve procurement"};
    app.require_subcommand(1);
    Common common;
    app.add_option("-c,--config", common.config_path, "key = value configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--set", common.sets, "override one config key (key=value), repeatable");
    app.add_option("--data", common.data, "dataset CSV (paths.data)");
    app.add_option("--results", common.results, "results directory (paths.results)");
    app.add_option("--seed", common.seed, "global seed");

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
    long long gen_n = -1;
    std::string gen_out;
    gen->add_option("--n", gen_n, "number of half-hourly scenarios");
    gen->add_option("-o,--out", gen_out, "output CSV (default: paths.data)");

    auto* train = app.add_subcommand("train", "fit a forecaster");
    std::string method = "raobf";
    std::string alpha;
    std::string beta;
    std::string train_out;
    train->add_option("-m,--method", method, "mse, quantile or raobf")
        ->check(CLI::IsMember({"mse", "quantile", "raobf"}));
    train->add_option("--alpha", alpha, "CVaR weight (train.alpha)");
    train->add_option("--beta", beta, "CVaR level (train.beta), or 'max'");
    train->add_option("-o,--out", train_out, "model JSON (default: <results>/model_<method>.json)");

    auto* eval = app.add_subcommand("eval", "evaluate a point forecaster on the test split");
    std::string model_path;
    std::string qm_path;
    std::string eval_out;
    eval->add_option("--model", model_path, "point model JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--quantile-model", qm_path, "quantile model JSON (default: fit on train split)")
        ->check(CLI::ExistingFile);
    eval->add_option("-o,--out", eval_out, "report JSON (default: <results>/eval.json)");

    auto* sweep = app.add_subcommand("sweep", "train and evaluate over the alpha x beta grid");
    std::string alphas;
    std::string betas;
    bool svg = false;
    sweep->add_option("--alphas", alphas, "comma-separated alpha grid (sweep.alphas)");
    sweep->add_option("--betas", betas, "comma-separated beta grid (sweep.betas)");
    sweep->add_flag("--svg", svg, "also write sweep.svg");

    auto* csp = app.add_subcommand("compare-sp", "RAOBF(alpha=0) against per-instance PF-SP");
    std::string scen_counts;
    csp->add_option("--scenarios", scen_counts, "comma-separated scenario counts (sp.scenarios)");

    auto* cro = app.add_subcommand("compare-ro", "RAOBF(alpha=1) against PF-RO, plus tail effect");
    std::string lambdas;
    std::string ro_betas;
    bool skip_tail = false;
    cro->add_option("--lambdas", lambdas, "comma-separated lambda grid (ro.lambdas)");
    cro->add_option("--betas", ro_betas, "comma-separated beta grid (ro.betas)");
    cro->add_flag("--skip-tail", skip_tail, "skip the two-dataset tail-effect runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            Overrides o;
            if (gen_n >= 0) {
                if (gen_n == 0) throw UsageError("--n must be >= 1");
                o.emplace_back("data.n_scenarios", std::to_string(gen_n));
            }
            Run run(common, o);
            const auto d = generate_synthetic(run.cfg.n_scenarios, run.cfg.generator.seed,
                                              run.cfg.generator, run.cfg.fp);
            const fs::path out = gen_out.empty() ? run.cfg.data : fs::path(gen_out);
            if (out.has_parent_path()) fs::create_directories(out.parent_path());
            write_csv(d, out);
            print_summary(d);
            std::printf("wrote %s\n", out.string().c_str());
            run.write_meta("gen-data", {{"output", out.generic_string()}});
        } else if (train->parsed()) {
            Overrides o;
            add_if(o, "train.alpha", alpha);
            if (beta != "max") add_if(o, "train.beta", beta);
            Run run(common, o);
            const auto data = run.load_data();
            const auto tr = data.subset(Split::train);
            const double floor = default_h_floor(run.cfg.fp, run.cfg.fleet);
            const fs::path out = train_out.empty() ? run.result_path("model_" + method + ".json")
                                                   : fs::path(train_out);
            json meta = {{"method", method}, {"output", out.generic_string()}};
            if (method == "mse") {
                write_json(json(fit_mse(tr, floor)), out);
            } else if (method == "quantile") {
                write_json(json(fit_quantile(tr, default_quantile_levels(), floor, run.cfg.quantile)),
                           out);
            } else {
                TrainConfig tc = run.cfg.train;
                if (beta == "max") tc.risk.beta = beta_max(tr.size());
                const auto rep = train_raobf(tr, run.cfg.fleet, run.cfg.fp, tc);
                write_json(json(rep.model), out);
                auto report_path = out;
                report_path.replace_extension(".report.json");
                json rj = train_report_json(rep, tc.risk);
                rj["beta_is_max"] = beta == "max";
                write_json(rj, report_path);
                meta["train_seconds"] = rep.seconds;
                std::printf("objective %.4f  mean %.4f  VaR %.4f  CVaR %.4f  iterations %d\n",
                            rep.objective, rep.mean_cost, rep.var, rep.cvar, rep.iterations);
            }
            std::printf("wrote %s\n", out.string().c_str());
            run.write_meta("train", meta);
        } else if (eval->parsed()) {
            Run run(common, {});
            const auto data = run.load_data();
            const auto model = load_forecast_model(model_path);
            const auto test = data.subset(Split::test);
            if (test.size() == 0) throw DataError("dataset has no test split (data.test_count)");
            const auto qm = qm_path.empty()
                                ? fit_quantile(data.subset(Split::train), default_quantile_levels(),
                                               default_h_floor(run.cfg.fp, run.cfg.fleet),
                                               run.cfg.quantile)
                                : load_quantile_model(qm_path);
            auto rep = evaluate(model, test, run.cfg.fleet, run.cfg.fp, run.cfg.eval, qm);
            rep.label = fs::path(model_path).stem().string();
            const fs::path out = eval_out.empty() ? run.result_path("eval.json") : fs::path(eval_out);
            write_json(json(rep), out);
            print_report(rep);
            run.write_meta("eval", {{"output", out.generic_string()}});
        } else if (sweep->parsed()) {
            Overrides o;
            add_if(o, "sweep.alphas", alphas);
            add_if(o, "sweep.betas", betas);
            Run run(common, o);
            const auto b = prepare_benchmark(run.load_data(), run.cfg);
            const auto rows = run_sweep(b, run.cfg);
            write_text_file(run.result_path("sweep.csv"),
                            [&](std::ostream& os) { write_sweep_csv(rows, run.hash, os); });
            if (svg) {
                write_text_file(run.result_path("sweep.svg"),
                                [&](std::ostream& os) { write_sweep_svg(rows, os); });
            }
            for (const auto& r : rows) print_report(r.report);
            run.write_meta("sweep", {{"rows", rows.size()}});
        } else if (csp->parsed()) {
            Overrides o;
            add_if(o, "sp.scenarios", scen_counts);
            Run run(common, o);
            const auto b = prepare_benchmark(run.load_data(), run.cfg);
            const auto a0 = train_with(b, run.cfg, 0.0, run.cfg.train.risk.beta);
            const auto c = run_compare_sp(b, run.cfg, a0.model);
            write_text_file(run.result_path("compare_sp.csv"),
                            [&](std::ostream& os) { write_sp_csv(c, run.hash, os); });
            std::vector<EvalReport> reps = {c.raobf};
            for (const auto& r : c.rows) reps.push_back(r.report);
            write_text_file(run.result_path("compare_sp.txt"),
                            [&](std::ostream& os) { compare(reps).write_text(os); });

            json timings = json::object();
            const auto fast = time_forecast_pipeline(a0.model, b, run.cfg);
            timings["raobf_inference_clearing_s_per_instance"] = fast.seconds_per_instance;
            std::printf("RAOBF inference + clearing: %.3g s per instance\n", fast.seconds_per_instance);
            for (const auto& r : c.rows) {
                const auto t = time_sp_pipeline(b, run.cfg, r.n_scen);
                timings["pf_sp_" + std::to_string(r.n_scen) + "_s_per_instance"] = t.seconds_per_instance;
                print_report(r.report);
                std::printf("  %zu scenarios: %.3g s per instance (%.1fx), MSOC gap %+.3f%%\n",
                            r.n_scen, t.seconds_per_instance,
                            t.seconds_per_instance / fast.seconds_per_instance, r.gap_msoc);
            }
            print_report(c.raobf);
            run.write_meta("compare-sp", {{"timings", timings}, {"train_seconds", a0.seconds}});
        } else if (cro->parsed()) {
            Overrides o;
            add_if(o, "ro.lambdas", lambdas);
            add_if(o, "ro.betas", ro_betas);
            Run run(common, o);
            const auto b = prepare_benchmark(run.load_data(), run.cfg);
            const auto c = run_compare_ro(b, run.cfg);
            write_text_file(run.result_path("compare_ro.csv"),
                            [&](std::ostream& os) { write_ro_csv(c, run.hash, os); });
            for (const auto& r : c.ro) print_report(r);
            for (const auto& r : c.raobf) print_report(r);
            json meta = {{"beta_max", beta_max(b.train.size())}};
            if (!skip_tail) {
                const auto rows = run_tail_effect(run.cfg);
                write_text_file(run.result_path("tail_effect.csv"),
                                [&](std::ostream& os) { write_tail_csv(rows, run.hash, os); });
                for (const auto& r : rows) {
                    std::printf("%-9s beta %-10s MMaxSOC gap %+.3f%%  MSOC gap %+.3f%%\n",
                                r.label.c_str(), format_double(r.beta).c_str(), r.gap_mmaxsoc,
                                r.gap_msoc);
                }
            }
            run.write_meta("compare-ro", meta);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
