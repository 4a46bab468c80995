#include "inertia/io.hpp"

#include <fstream>

#include "inertia/errors.hpp"

namespace inertia {

using nlohmann::json;

void to_json(json& j, const ForecastModel& m) {
    j = json{{"kind", "point"},
             {"feature_names", m.feature_names},
             {"theta", m.theta},
             {"h_floor", m.h_floor}};
}

void from_json(const json& j, ForecastModel& m) {
    if (j.value("kind", "") != "point") throw ConfigError("not a point forecast model");
    j.at("feature_names").get_to(m.feature_names);
    j.at("theta").get_to(m.theta);
    j.at("h_floor").get_to(m.h_floor);
    m.validate();
}

void to_json(json& j, const QuantileModel& m) {
    j = json{{"kind", "quantile"},
             {"feature_names", m.feature_names},
             {"taus", m.taus},
             {"thetas", m.thetas},
             {"h_floor", m.h_floor}};
}

void from_json(const json& j, QuantileModel& m) {
    if (j.value("kind", "") != "quantile") throw ConfigError("not a quantile model");
    j.at("feature_names").get_to(m.feature_names);
    j.at("taus").get_to(m.taus);
    j.at("thetas").get_to(m.thetas);
    j.at("h_floor").get_to(m.h_floor);
    m.validate();
}

void to_json(json& j, const EvalRow& r) {
    j = json{{"timestamp", r.timestamp}, {"h_true", r.h_true}, {"h_hat", r.h_hat},
             {"da_total", r.da_total},   {"soc", r.soc},       {"soc_mean", r.soc_mean},
             {"var", r.var},             {"cvar", r.cvar},     {"max_soc", r.max_soc},
             {"ape", r.ape}};
}

void to_json(json& j, const EvalReport& r) {
    j = json{{"label", r.label},     {"msoc", r.msoc}, {"mcvar", r.mcvar},
             {"mmaxsoc", r.mmaxsoc}, {"mape", r.mape}, {"per_scenario", r.per_scenario}};
}

json train_report_json(const TrainReport& r, const RiskConfig& risk) {
    return json{{"alpha", risk.alpha},
                {"beta", risk.beta},
                {"objective", r.objective},
                {"mean_cost", r.mean_cost},
                {"var", r.var},
                {"cvar", r.cvar},
                {"restart_index", r.restart_index},
                {"iterations", r.iterations},
                {"warm_started", r.warm_started},
                {"loss_trajectory", r.loss_trajectory},
                {"model", r.model}};
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

namespace {

template <typename Model>
Model load_model(const std::filesystem::path& path) {
    const json j = read_json(path);
    try {
        return j.get<Model>();
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace

ForecastModel load_forecast_model(const std::filesystem::path& path) {
    return load_model<ForecastModel>(path);
}

QuantileModel load_quantile_model(const std::filesystem::path& path) {
    return load_model<QuantileModel>(path);
}

}  // namespace inertia
