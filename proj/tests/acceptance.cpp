// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Usage: acceptance <path to inertia CLI>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "inertia/baselines.hpp"
#include "inertia/data.hpp"
#include "inertia/eval.hpp"
#include "inertia/experiment.hpp"
#include "inertia/forecast.hpp"
#include "inertia/market.hpp"
#include "inertia/random.hpp"
#include "inertia/risk.hpp"
#include "inertia/train.hpp"
#include "oracles.hpp"

using namespace inertia;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name;
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << std::endl;
    if (!o.pass) ++failures;
}

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Greedy clearing against brute force.
Outcome dispatch_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        FleetSpec f;
        const int m = 1 + static_cast<int>(rng.uniform() * 3.0);
        for (int i = 0; i < m; ++i) {
            UnitClass u;
            u.name = "c" + std::to_string(i);
            u.count = 1 + static_cast<int>(rng.uniform() * 4.0);
            u.capacity_each = static_cast<double>(1 + static_cast<int>(rng.uniform() * 8.0));
            u.price_da = std::round(rng.uniform(10.0, 300.0)) + 0.01 * i;
            u.price_rt = std::round(rng.uniform(10.0, 400.0)) + 0.01 * i;
            u.rt_flexible = rng.uniform() < 0.6;
            f.classes.push_back(u);
        }
        f.penalty_price = 1000.0;
        std::vector<int> caps;
        std::vector<double> prices;
        for (const auto& c : f.classes) {
            caps.push_back(static_cast<int>(c.capacity()));
            prices.push_back(c.price_da);
        }
        const int cap = static_cast<int>(f.total_capacity());
        const int t = static_cast<int>(rng.uniform() * (cap + 1));
        const int realized = static_cast<int>(rng.uniform() * (cap + 5));

        const auto da = clear_day_ahead(t, f);
        worst = std::max(worst, std::abs(da.da_cost - oracle::brute_force_da(t, caps, prices)));

        std::vector<int> head;
        std::vector<double> rt_prices;
        for (std::size_t j = 0; j < f.classes.size(); ++j) {
            if (!f.classes[j].rt_flexible) continue;
            head.push_back(caps[j] - static_cast<int>(std::lround(da.da_schedule[j])));
            rt_prices.push_back(f.classes[j].price_rt);
        }
        const auto rt = clear_real_time(realized, da, f);
        const double rt_ref = oracle::brute_force_rt(std::max(0, realized - t), head, rt_prices, f.penalty_price);
        worst = std::max(worst, std::abs(rt.total_cost - da.da_cost - rt_ref));
        worst = std::max(worst, std::abs(rt.total_cost - oracle::brute_force_two_stage(t, realized, f)));
    }
    const double secs = seconds_since(t0);
    return {worst <= 0.01 && secs < 10.0,
            "max |greedy - brute force| = " + num(worst) + " GBP over 1000 instances, " + num(secs, 3) + " s"};
}

// 2. Empirical VaR/CVaR against sorting.
Outcome risk_oracle() {
    Rng rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = 1 + static_cast<std::size_t>(rng.uniform() * 200);
        std::vector<double> c(n);
        for (auto& v : c) v = rng.uniform(0.0, 1e5);
        if (trial % 4 == 0) {
            for (auto& v : c) v = std::round(v / 1e4) * 1e4;
        }
        const double beta = rng.uniform(0.0, 0.999);
        const auto r = var_cvar(c, beta);
        const auto ref = oracle::sorted_tail(c, beta);
        worst = std::max(worst, std::abs(r.var - ref.var) / std::max(1.0, std::abs(ref.var)));
        worst = std::max(worst, std::abs(r.cvar - ref.cvar) / std::max(1.0, std::abs(ref.cvar)));
    }
    const std::vector<double> five = {100, 200, 300, 400, 500};
    const auto ex = var_cvar(five, 0.8);
    const bool exact = ex.var == 400.0 && ex.cvar == 500.0;
    return {worst <= 1e-9 && exact, "max relative error " + num(worst) + ", {100..500} at 0.8 -> (" +
                                        num(ex.var) + ", " + num(ex.cvar) + ")"};
}

double rel_inf(const std::vector<double>& g, const std::vector<double>& fd) {
    double num_ = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        num_ = std::max(num_, std::abs(g[j] - fd[j]));
        den = std::max(den, std::abs(fd[j]));
    }
    return num_ / std::max(den, 1e-300);
}

// 3. Subgradients against central differences at points away from kinks.
Outcome gradient_checks() {
    const auto fleet = FleetSpec::reference();
    const FrequencyParams fp;
    Rng rng(303);
    GeneratorConfig g;
    g.n_features = 2;
    g.test_count = 0;

    double worst_raobf = 0.0;
    int accepted = 0;
    int tried = 0;
    while (accepted < 100 && tried < 5000) {
        ++tried;
        const auto d = generate_synthetic(50, 1000 + static_cast<std::uint64_t>(tried), g);
        const auto base = fit_mse(d, default_h_floor(fp, fleet));
        const RiskConfig risk{rng.uniform(), rng.uniform(0.0, 0.95)};
        std::vector<double> theta = base.theta;
        for (auto& t : theta) t *= 1.0 + 0.05 * rng.normal();
        auto f = [&](const std::vector<double>& t) { return raobf_loss(t, d, fleet, fp, risk).objective; };
        std::vector<double> step(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j) step[j] = 1e-7 * std::max(1.0, std::abs(theta[j]));
        // A kink between the probes shows up as disagreeing one-sided differences.
        const double f0 = f(theta);
        bool smooth = true;
        for (std::size_t j = 0; j < theta.size() && smooth; ++j) {
            auto up = theta;
            auto dn = theta;
            up[j] += step[j];
            dn[j] -= step[j];
            const double fwd = (f(up) - f0) / step[j];
            const double bwd = (f0 - f(dn)) / step[j];
            smooth = std::abs(fwd - bwd) <= 1e-6 * std::max(1.0, std::abs(fwd));
        }
        if (!smooth) continue;
        ++accepted;
        const auto fd = oracle::central_difference(f, theta, step);
        worst_raobf = std::max(worst_raobf, rel_inf(raobf_subgradient(theta, d, fleet, fp, risk), fd));
    }

    double worst_pinball = 0.0;
    int accepted_pb = 0;
    int tried_pb = 0;
    while (accepted_pb < 100 && tried_pb < 5000) {
        ++tried_pb;
        const auto d = generate_synthetic(200, 5000 + static_cast<std::uint64_t>(tried_pb), g);
        const auto base = fit_mse(d, 1.0);
        const double tau = rng.uniform(0.01, 0.99);
        std::vector<double> theta = base.theta;
        theta[0] += 500.0 * rng.normal();
        std::vector<double> step(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j) step[j] = 1e-6 * std::max(1.0, std::abs(theta[j]));
        // Non-kink: no residual changes sign anywhere within the probes.
        bool smooth = true;
        for (const auto& s : d.scenarios) {
            double reach = 0.0;
            for (std::size_t j = 0; j < theta.size(); ++j) reach += step[j] * std::abs(s.features[j]);
            if (std::abs(s.inertia_true - linear_score(theta, s.features)) <= 2.0 * reach) smooth = false;
        }
        if (!smooth) continue;
        ++accepted_pb;
        const auto fd = oracle::central_difference(
            [&](const std::vector<double>& t) { return pinball_loss(t, d, tau); }, theta, step);
        worst_pinball = std::max(worst_pinball, rel_inf(pinball_subgradient(theta, d, tau), fd));
    }
    return {accepted == 100 && accepted_pb == 100 && worst_raobf <= 1e-4 && worst_pinball <= 1e-4,
            "raobf max rel err " + num(worst_raobf) + " (" + std::to_string(accepted) +
                " points), pinball " + num(worst_pinball) + " (" + std::to_string(accepted_pb) + " points)"};
}

// 4. Trained objective against an exhaustive parameter grid on tiny instances.
Outcome tiny_optimality() {
    const auto fleet = FleetSpec::reference();
    const FrequencyParams fp;
    const double k = fp.nadir_constant();
    const double floor = default_h_floor(fp, fleet);
    const TwoStageCost cost(fleet);
    Rng rng(404);
    double worst_ratio = 0.0;
    std::string worst_case;

    for (int inst = 0; inst < 20; ++inst) {
        const bool one_param = inst < 4;
        const auto n = 2 + static_cast<std::size_t>(rng.uniform() * 4.0);  // 2..5 scenarios
        Dataset d;
        d.feature_names = one_param ? std::vector<std::string>{"intercept"}
                                    : std::vector<std::string>{"intercept", "x"};
        for (std::size_t s = 0; s < n; ++s) {
            const double x = rng.uniform(0.0, 100.0);
            const double h = std::clamp(3000.0 + 40.0 * x + 900.0 * rng.normal(), 2000.0, 10000.0);
            Scenario sc;
            sc.timestamp = "t" + std::to_string(s);
            sc.features = one_param ? std::vector<double>{1.0} : std::vector<double>{1.0, x};
            sc.inertia_true = h;
            sc.realized_req = reserve_from_inertia(h, fp);
            d.scenarios.push_back(sc);
            d.split.push_back(Split::train);
        }
        const double alphas[] = {0.0, 0.5, 1.0};
        const RiskConfig risk{alphas[inst % 3], inst % 2 ? 0.8 : 0.5};

        std::vector<double> costs(n);
        auto objective = [&](double a, double b, double x_lo, double x_hi) {
            for (std::size_t s = 0; s < n; ++s) {
                const double w = one_param ? 0.0 : (d.scenarios[s].features[1] - x_lo) / (x_hi - x_lo);
                const double h = std::max(a + w * (b - a), floor);
                costs[s] = cost.evaluate(std::min(k / h, cost.capacity()), d.scenarios[s].realized_req).cost;
            }
            double mean = 0.0;
            for (double c : costs) mean += c / static_cast<double>(n);
            return (1.0 - risk.alpha) * mean + (risk.alpha > 0.0 ? risk.alpha * var_cvar(costs, risk.beta).cvar : 0.0);
        };

        // Grid over the forecasts at the two extreme scenarios (an invertible
        // reparameterization of theta), coarse then refined at 1 MW*s.
        double x_lo = 0.0;
        double x_hi = 1.0;
        if (!one_param) {
            x_lo = 1e300;
            x_hi = -1e300;
            for (const auto& s : d.scenarios) {
                x_lo = std::min(x_lo, s.features[1]);
                x_hi = std::max(x_hi, s.features[1]);
            }
        }
        const double lo = -4000.0;
        const double hi = 12000.0;
        const double coarse = 20.0;
        std::vector<std::tuple<double, double, double>> cells;
        for (double a = lo; a <= hi; a += coarse) {
            if (one_param) {
                cells.emplace_back(objective(a, a, x_lo, x_hi), a, a);
                continue;
            }
            for (double b = lo; b <= hi; b += coarse) cells.emplace_back(objective(a, b, x_lo, x_hi), a, b);
        }
        const std::size_t keep = std::min<std::size_t>(cells.size(), 40);
        std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(keep), cells.end());
        double grid_best = std::get<0>(cells.front());
        for (std::size_t c = 0; c < keep; ++c) {
            const auto [v, a0, b0] = cells[c];
            for (double a = a0 - coarse; a <= a0 + coarse; a += 1.0) {
                if (one_param) {
                    grid_best = std::min(grid_best, objective(a, a, x_lo, x_hi));
                    continue;
                }
                for (double b = b0 - coarse; b <= b0 + coarse; b += 1.0) {
                    grid_best = std::min(grid_best, objective(a, b, x_lo, x_hi));
                }
            }
        }

        TrainConfig cfg;
        cfg.risk = risk;
        cfg.restarts = 10;
        const auto r = train_raobf(d, fleet, fp, cfg);
        const double ratio = r.objective / grid_best;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_case = "instance " + std::to_string(inst) + " (train " + num(r.objective, 8) +
                         ", grid " + num(grid_best, 8) + ")";
        }
    }
    return {worst_ratio <= 1.005, "worst train/grid ratio " + num(worst_ratio, 6) + " at " + worst_case};
}

// 5-9 share one benchmark run.
struct BenchmarkResults {
    EvalReport mse;
    EvalReport a0;
    EvalReport a1;
    ForecastModel a0_model;
    std::vector<SweepRow> sweep;
    SpComparison sp;
    EvalReport a1_max;
    EvalReport ro_max;
    double ro_lambda = 0.0;
    Timing forecast_time;
    Timing sp_time;
};

Outcome table3(const BenchmarkResults& r) {
    const bool mape = r.mse.mape < r.a0.mape && r.a0.mape < r.a1.mape;
    const bool msoc = r.a0.msoc < r.mse.msoc;
    const bool mcvar = r.a1.mcvar < r.a0.mcvar && r.a0.mcvar < r.mse.mcvar;
    std::ostringstream s;
    s << "MAPE " << num(r.mse.mape) << " < " << num(r.a0.mape) << " < " << num(r.a1.mape)
      << "; MSOC saving " << num(-percent_gap(r.a0.msoc, r.mse.msoc)) << "%; MCVaR "
      << num(r.a1.mcvar, 7) << " < " << num(r.a0.mcvar, 7) << " < " << num(r.mse.mcvar, 7);
    return {mape && msoc && mcvar, s.str()};
}

Outcome sweep_monotone(const BenchmarkResults& r, const ExperimentConfig& cfg) {
    const double tol = 0.005;
    bool ok = true;
    std::ostringstream s;
    for (double beta : cfg.sweep_betas) {
        std::vector<const SweepRow*> rows;
        for (const auto& row : r.sweep) {
            if (row.beta == beta) rows.push_back(&row);
        }
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& p = rows[i - 1]->report;
            const auto& q = rows[i]->report;
            const bool m1 = q.msoc >= p.msoc * (1.0 - tol);
            const bool m2 = q.mmaxsoc <= p.mmaxsoc * (1.0 + tol);
            const bool m3 = q.mape >= p.mape;
            if (!(m1 && m2 && m3)) {
                ok = false;
                s << "beta " << num(beta) << " alpha " << num(rows[i - 1]->alpha) << "->" << num(rows[i]->alpha)
                  << (m1 ? "" : " MSOC drops") << (m2 ? "" : " MMaxSOC rises") << (m3 ? "" : " MAPE drops")
                  << "; ";
            }
        }
        if (!rows.empty()) {
            s << "beta " << num(beta) << ": MSOC " << num(rows.front()->report.msoc, 7) << "->"
              << num(rows.back()->report.msoc, 7) << ", MMaxSOC " << num(rows.front()->report.mmaxsoc, 7)
              << "->" << num(rows.back()->report.mmaxsoc, 7) << ", MAPE " << num(rows.front()->report.mape)
              << "->" << num(rows.back()->report.mape) << "; ";
        }
    }
    return {ok && !r.sweep.empty(), s.str()};
}

Outcome sp_equivalence(const BenchmarkResults& r) {
    double gap100 = NAN;
    double gap5 = NAN;
    bool tail_ok = true;
    std::ostringstream s;
    for (const auto& row : r.sp.rows) {
        if (row.n_scen == 100) gap100 = std::abs(row.gap_msoc);
        if (row.n_scen == 5) gap5 = std::abs(row.gap_msoc);
    }
    for (const auto& row : r.sp.rows) {
        if (row.n_scen >= 40 && !(std::abs(row.gap_msoc) <= gap5)) {
            tail_ok = false;
            s << "n=" << row.n_scen << " gap " << num(std::abs(row.gap_msoc)) << "% > 5-scenario gap; ";
        }
    }
    s << "|MSOC gap| at 100 scenarios " << num(gap100) << "%, at 5 scenarios " << num(gap5) << "%";
    return {gap100 <= 2.0 && tail_ok, s.str()};
}

Outcome ro_equivalence(const BenchmarkResults& r) {
    const double g_msoc = percent_gap(r.a1_max.msoc, r.ro_max.msoc);
    const double g_max = percent_gap(r.a1_max.mmaxsoc, r.ro_max.mmaxsoc);
    return {std::abs(g_msoc) <= 2.0 && std::abs(g_max) <= 2.0,
            "RAOBF(1, beta_max) vs PF-RO(lambda " + num(r.ro_lambda) + "): MSOC " + num(g_msoc) +
                "%, MMaxSOC " + num(g_max) + "%"};
}

Outcome runtime_ratio(const BenchmarkResults& r) {
    const double ratio = r.sp_time.seconds_per_instance / r.forecast_time.seconds_per_instance;
    return {ratio >= 10.0, "forecast+clearing " + num(r.forecast_time.seconds_per_instance * 1e6) +
                               " us/instance, PF-SP(100) " + num(r.sp_time.seconds_per_instance * 1e6) +
                               " us/instance, ratio " + num(ratio)};
}

// 10. Tail effect on the heavy and light tailed datasets.
Outcome tail_effect(const ExperimentConfig& cfg) {
    const auto rows = run_tail_effect(cfg);
    const double tol = 0.5;  // percentage points
    std::map<std::string, std::vector<const TailRow*>> by;
    for (const auto& row : rows) by[row.label].push_back(&row);
    bool ok = by.size() == 2;
    std::ostringstream s;
    for (const auto& [label, rs] : by) {
        s << label << " (excess kurtosis " << num(rs.front()->kurtosis, 3) << ") MMaxSOC gaps";
        for (std::size_t i = 0; i < rs.size(); ++i) {
            s << ' ' << num(rs[i]->gap_mmaxsoc, 3);
            if (i > 0 && rs[i]->gap_mmaxsoc > rs[i - 1]->gap_mmaxsoc + tol) {
                ok = false;
                s << "(rises)";
            }
        }
        s << "; ";
    }
    const auto& hi = by["high_tail"];
    const auto& lo = by["low_tail"];
    bool ordered = hi.size() == lo.size();
    for (std::size_t i = 0; i < std::min(hi.size(), lo.size()); ++i) {
        if (hi[i]->gap_mmaxsoc < lo[i]->gap_mmaxsoc - tol) {
            ordered = false;
            s << "beta " << num(hi[i]->beta) << ": high-tail gap below low-tail gap; ";
        }
    }
    if (ordered) s << "high-tail gap >= low-tail gap at every beta";
    ok = ok && ordered;
    return {ok, s.str()};
}

// 11. Every CLI subcommand twice with identical inputs.
std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        const std::string name = e.path().filename().string();
        if (name.size() >= 10 && name.compare(name.size() - 10, 10, ".meta.json") == 0) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), root).generic_string()] = ss.str();
    }
    return files;
}

Outcome cli_determinism(const std::string& cli) {
    const fs::path base = fs::temp_directory_path() / "inertia_acceptance_cli";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg_path = base / "small.cfg";
    {
        std::ofstream c(cfg_path);
        c << "seed = 17\n"
             "[data]\nn_scenarios = 1200\ntest_count = 48\nn_features = 4\n"
             "[train]\nrestarts = 2\nmax_iters = 200\n"
             "[eval]\nk_size = 30\n"
             "[sweep]\nalphas = 0, 0.5, 1\nbetas = 0.5, 0.9\n"
             "[sp]\nscenarios = 5, 20\ntiming_min_seconds = 0.01\n"
             "[ro]\nlambdas = 0.9, 0.99\nbetas = 0.5, 0.9\n"
             "[tail]\nn_scenarios = 1200\nhigh.test_count = 48\nlow.test_count = 48\n";
    }
    const std::vector<std::string> steps = {
        "gen-data",
        "train -m mse",
        "train -m quantile",
        "train -m raobf --alpha 0.5 --beta 0.9",
        "train -m raobf --alpha 1 --beta max -o {R}/model_max.json",
        "eval --model {R}/model_mse.json",
        "eval --model {R}/model_raobf.json --quantile-model {R}/model_quantile.json -o {R}/eval_raobf.json",
        "sweep --svg",
        "compare-sp",
        "compare-ro",
    };
    // Both repetitions use the same paths, so the config hash written into
    // the result files is the same too.
    const fs::path run = base / "run";
    const std::string results = (run / "results").string();
    std::vector<std::map<std::string, std::string>> trees;
    for (int rep = 0; rep < 2; ++rep) {
        fs::remove_all(run);
        fs::create_directories(run);
        for (const auto& step : steps) {
            std::string args = step;
            for (std::size_t p; (p = args.find("{R}")) != std::string::npos;) args.replace(p, 3, results);
            const std::string cmd = "\"" + cli + "\" -c \"" + cfg_path.string() + "\" --data \"" +
                                    (run / "data.csv").string() + "\" --results \"" + results + "\" " +
                                    args + " > \"" + (base / "log.txt").string() + "\" 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                return {false, "command failed: " + step + " (see " + (base / "log.txt").string() + ")"};
            }
        }
        trees.push_back(read_tree(run));
    }
    std::vector<std::string> differ;
    for (const auto& [name, content] : trees[0]) {
        const auto it = trees[1].find(name);
        if (it == trees[1].end() || it->second != content) differ.push_back(name);
    }
    if (trees[0].size() != trees[1].size()) differ.push_back("<file set>");
    std::string detail = std::to_string(trees[0].size()) + " result files compared over " +
                         std::to_string(steps.size()) + " commands";
    for (const auto& d : differ) detail += "; differs: " + d;
    return {differ.empty() && !trees[0].empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <inertia CLI path>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const auto started = std::chrono::steady_clock::now();

    auto guarded = [](int id, const std::string& name, const std::function<Outcome()>& f) {
        try {
            report(id, name, f());
        } catch (const std::exception& e) {
            report(id, name, {false, std::string("exception: ") + e.what()});
        }
    };

    guarded(1, "dispatch oracle", dispatch_oracle);
    guarded(2, "risk oracle", risk_oracle);
    guarded(3, "gradient checks", gradient_checks);
    guarded(4, "tiny-instance optimality", tiny_optimality);

    const ExperimentConfig cfg;
    BenchmarkResults r;
    bool bench_ok = true;
    std::string bench_error;
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto data = generate_synthetic(cfg.n_scenarios, cfg.generator.seed, cfg.generator, cfg.fp);
        const auto b = prepare_benchmark(data, cfg);
        const double floor = default_h_floor(cfg.fp, cfg.fleet);
        const auto mse = fit_mse(b.train, floor);
        r.mse = evaluate_model(mse, b, cfg, "mse");
        r.sweep = run_sweep(b, cfg);
        r.a0_model = train_with(b, cfg, 0.0, cfg.train.risk.beta).model;
        r.a0 = evaluate_model(r.a0_model, b, cfg, "raobf_a0");
        r.a1 = evaluate_model(train_with(b, cfg, 1.0, cfg.train.risk.beta).model, b, cfg, "raobf_a1");
        r.sp = run_compare_sp(b, cfg, r.a0_model);
        r.ro_lambda = *std::max_element(cfg.ro_lambdas.begin(), cfg.ro_lambdas.end());
        r.a1_max = evaluate_model(train_with(b, cfg, 1.0, beta_max(b.train.size())).model, b, cfg, "raobf_a1_bmax");
        r.ro_max = evaluate_totals(ro_schedules(b, cfg, r.ro_lambda), b, cfg, "pf_ro");
        r.forecast_time = time_forecast_pipeline(r.a0_model, b, cfg);
        r.sp_time = time_sp_pipeline(b, cfg, 100);
        std::cout << "      benchmark: " << b.train.size() << " train / " << b.test.size() << " test scenarios, "
                  << num(seconds_since(t0), 3) << " s" << std::endl;
    } catch (const std::exception& e) {
        bench_ok = false;
        bench_error = std::string("benchmark failed: ") + e.what();
    }
    auto bench = [&](int id, const std::string& name, const std::function<Outcome()>& f) {
        if (!bench_ok) {
            report(id, name, {false, bench_error});
            return;
        }
        guarded(id, name, f);
    };
    bench(5, "risk-averse ordering", [&] { return table3(r); });
    bench(6, "alpha sweep monotonicity", [&] { return sweep_monotone(r, cfg); });
    bench(7, "stochastic-program equivalence", [&] { return sp_equivalence(r); });
    bench(8, "robust-program equivalence", [&] { return ro_equivalence(r); });
    bench(9, "runtime ratio", [&] { return runtime_ratio(r); });

    guarded(10, "tail effect", [&] { return tail_effect(cfg); });
    guarded(11, "CLI determinism", [&] { return cli_determinism(cli); });

    std::cout << (failures == 0 ? "all 11 criteria passed" : std::to_string(failures) + " of 11 criteria failed")
              << " in " << num(seconds_since(started), 4) << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
