#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "inertia/eval.hpp"
#include "inertia/forecast.hpp"
#include "inertia/train.hpp"

namespace inertia {

void to_json(nlohmann::json& j, const ForecastModel& m);
void from_json(const nlohmann::json& j, ForecastModel& m);
void to_json(nlohmann::json& j, const QuantileModel& m);
void from_json(const nlohmann::json& j, QuantileModel& m);
void to_json(nlohmann::json& j, const EvalRow& r);
void to_json(nlohmann::json& j, const EvalReport& r);

// Wall-clock seconds are left out so that reports are reproducible.
nlohmann::json train_report_json(const TrainReport& r, const RiskConfig& risk);

// Pretty-printed with a trailing newline.
void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

// Throws ConfigError when the file is not a model of the requested kind.
ForecastModel load_forecast_model(const std::filesystem::path& path);
QuantileModel load_quantile_model(const std::filesystem::path& path);

}  // namespace inertia
