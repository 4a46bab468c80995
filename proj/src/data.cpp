#include "inertia/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "inertia/errors.hpp"
#include "inertia/random.hpp"

namespace inertia {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Howard Hinnant's civil calendar algorithms (days relative to 1970-01-01).
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

struct Civil {
    long long year;
    unsigned month;
    unsigned day;
};

Civil civil_from_days(long long z) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long y = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {y + (m <= 2), m, d};
}

long long parse_start_day(const std::string& iso) {
    long long y = 0;
    unsigned m = 0;
    unsigned d = 0;
    char dash1 = 0;
    char dash2 = 0;
    std::istringstream is(iso);
    if (!(is >> y >> dash1 >> m >> dash2 >> d) || dash1 != '-' || dash2 != '-' || m < 1 || m > 12 ||
        d < 1 || d > 31) {
        throw ConfigError("generator start must be YYYY-MM-DD, got '" + iso + "'");
    }
    return days_from_civil(y, m, d);
}

std::string format_timestamp(long long day, int slot) {
    const Civil c = civil_from_days(day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:00Z", c.year, c.month, c.day,
                  slot / 2, (slot % 2) * 30);
    return buf;
}

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Rounds to `decimals` places; dividing keeps the shortest text form short.
double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

// Stationary AR(1) with unit marginal variance.
struct Ar1 {
    double phi;
    double state = 0.0;
    double step(Rng& rng) {
        state = phi * state + std::sqrt(1.0 - phi * phi) * rng.normal();
        return state;
    }
};

// Unit-variance noise draw.
double draw_noise(Rng& rng, const GeneratorConfig& cfg) {
    switch (cfg.noise_dist) {
        case NoiseDistribution::gaussian: {
            double z = rng.normal();
            if (cfg.noise_trunc > 0.0) {
                while (std::abs(z) > cfg.noise_trunc) z = rng.normal();
            }
            return z;
        }
        case NoiseDistribution::student_t: {
            const double t = rng.student_t(cfg.tail_dof);
            return t / std::sqrt(static_cast<double>(cfg.tail_dof) / (cfg.tail_dof - 2));
        }
        case NoiseDistribution::uniform:
            return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    }
    return 0.0;
}

// Synchronous-generation proxy range mapped onto the inertia range; the
// bounds cover the generator's proxy distribution with a small margin.
constexpr double kProxyLow = -27000.0;
constexpr double kProxyHigh = 42000.0;
constexpr double kRangeMargin = 0.06;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void Dataset::validate() const {
    if (feature_names.empty()) throw DataError("dataset has no features");
    if (split.size() != scenarios.size()) throw DataError("dataset split tags do not match rows");
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i];
        const std::string where = "scenario " + std::to_string(i + 1) + " (" + s.timestamp + ")";
        if (s.features.size() != feature_names.size()) {
            throw DataError(where + ": feature count does not match header");
        }
        for (double v : s.features) {
            if (!std::isfinite(v)) throw DataError(where + ": non-finite feature");
        }
        if (s.features.front() != 1.0) throw DataError(where + ": first feature must be 1");
        if (!(s.inertia_true > 0.0) || !std::isfinite(s.inertia_true)) {
            throw DataError(where + ": inertia_true must be positive");
        }
        if (!(s.realized_req >= 0.0) || !std::isfinite(s.realized_req)) {
            throw DataError(where + ": realized_req must be >= 0");
        }
    }
}

Dataset Dataset::subset(Split which) const {
    Dataset out;
    out.feature_names = feature_names;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (split[i] == which) {
            out.scenarios.push_back(scenarios[i]);
            out.split.push_back(which);
        }
    }
    return out;
}

void apply_chronological_split(Dataset& data, std::size_t test_count) {
    const std::size_t n = data.scenarios.size();
    const std::size_t first_test = test_count >= n ? 0 : n - test_count;
    data.split.assign(n, Split::train);
    for (std::size_t i = first_test; i < n; ++i) data.split[i] = Split::test;
}

NoiseDistribution parse_noise_distribution(const std::string& name) {
    if (name == "gaussian") return NoiseDistribution::gaussian;
    if (name == "student_t") return NoiseDistribution::student_t;
    if (name == "uniform") return NoiseDistribution::uniform;
    throw ConfigError("unknown noise distribution '" + name + "'");
}

std::string to_string(NoiseDistribution d) {
    switch (d) {
        case NoiseDistribution::gaussian: return "gaussian";
        case NoiseDistribution::student_t: return "student_t";
        case NoiseDistribution::uniform: return "uniform";
    }
    return "?";
}

void GeneratorConfig::validate() const {
    if (!(inertia_min > 0.0) || !(inertia_max > inertia_min) || !std::isfinite(inertia_max)) {
        throw ConfigError("generator needs 0 < inertia_min < inertia_max");
    }
    if (!(noise_scale >= 0.0) || !(hetero_gain >= 0.0)) {
        throw ConfigError("generator noise parameters must be >= 0");
    }
    const int max_features = static_cast<int>(generator_feature_names().size());
    if (n_features < 1 || n_features > max_features) {
        throw ConfigError("n_features must lie in [1, " + std::to_string(max_features) + "]");
    }
    if (noise_dist == NoiseDistribution::student_t && tail_dof < 3) {
        throw ConfigError("student_t noise needs tail_dof >= 3 for finite variance");
    }
    if (noise_trunc < 0.0) throw ConfigError("noise_trunc must be >= 0");
    parse_start_day(start);
}

GeneratorConfig GeneratorConfig::from_config(const KeyValueConfig& kv, const GeneratorConfig& base,
                                             const std::string& prefix) {
    GeneratorConfig c = base;
    const auto key = [&](const char* name) { return prefix + name; };
    c.inertia_min = kv.get_double(key("inertia_min"), c.inertia_min);
    c.inertia_max = kv.get_double(key("inertia_max"), c.inertia_max);
    c.noise_scale = kv.get_double(key("noise_scale"), c.noise_scale);
    c.hetero_gain = kv.get_double(key("hetero_gain"), c.hetero_gain);
    c.n_features = static_cast<int>(kv.get_int(key("n_features"), c.n_features));
    if (auto d = kv.get(key("noise_dist"))) c.noise_dist = parse_noise_distribution(*d);
    c.noise_trunc = kv.get_double(key("noise_trunc"), c.noise_trunc);
    c.tail_dof = static_cast<int>(kv.get_int(key("tail_dof"), c.tail_dof));
    c.seed = static_cast<std::uint64_t>(kv.get_int(key("seed"), static_cast<long long>(c.seed)));
    c.test_count = static_cast<std::size_t>(kv.get_int(key("test_count"), static_cast<long long>(c.test_count)));
    c.start = kv.get_string(key("start"), c.start);
    c.validate();
    return c;
}

GeneratorConfig GeneratorConfig::load(const std::filesystem::path& path) {
    const auto kv = KeyValueConfig::load(path);
    auto cfg = from_config(kv, GeneratorConfig{});
    if (auto unused = kv.unused_keys(); !unused.empty()) {
        throw ConfigError(path.string() + ": unknown generator key '" + unused.front() + "'");
    }
    return cfg;
}

const std::vector<std::string>& generator_feature_names() {
    static const std::vector<std::string> names = {
        "load",     "wind_onshore", "wind_offshore", "solar",   "coal",       "ic_french",
        "ic_dutch", "ic_irish",     "ic_eastwest",   "weekend", "temperature"};
    return names;
}

Dataset generate_synthetic(std::size_t n, std::uint64_t seed, const GeneratorConfig& cfg,
                           const FrequencyParams& fp) {
    if (n < 1) throw ConfigError("generate_synthetic: n must be >= 1");
    cfg.validate();
    fp.validate();

    Rng rng(seed);
    Ar1 temp_ar{0.995};
    Ar1 load_ar{0.97};
    Ar1 cloud_ar{0.98};
    Ar1 wind_ar{0.995};
    Ar1 wind_off_ar{0.995};
    std::array<Ar1, 4> ic_ar{Ar1{0.99}, Ar1{0.99}, Ar1{0.99}, Ar1{0.99}};

    const long long day0 = parse_start_day(cfg.start);
    const auto& all_names = generator_feature_names();
    const auto k = static_cast<std::size_t>(cfg.n_features);

    Dataset out;
    out.feature_names.push_back("intercept");
    out.feature_names.insert(out.feature_names.end(), all_names.begin(), all_names.begin() + k);
    out.scenarios.reserve(n);

    const double span = cfg.inertia_max - cfg.inertia_min;
    const double h_lo = cfg.inertia_min + kRangeMargin * span;
    const double h_hi = cfg.inertia_max - kRangeMargin * span;
    const double gain = (h_hi - h_lo) / (kProxyHigh - kProxyLow);

    for (std::size_t t = 0; t < n; ++t) {
        const long long day = day0 + static_cast<long long>(t / 48);
        const int slot = static_cast<int>(t % 48);
        const double hour = slot / 2.0;
        const Civil civ = civil_from_days(day);
        const double doy = static_cast<double>(day - days_from_civil(civ.year, 1, 1));
        const double winter = std::cos(kTwoPi * (doy - 15.0) / 365.25);
        const long long weekday = ((day % 7) + 11) % 7;  // 0 = Sunday
        const double weekend = (weekday == 0 || weekday == 6) ? 1.0 : 0.0;

        const double temperature =
            10.0 - 6.0 * winter + 3.0 * std::sin(kTwoPi * (hour - 9.0) / 24.0) + 2.0 * temp_ar.step(rng);

        const double daily = 0.5 - 0.5 * std::cos(kTwoPi * (hour - 4.0) / 24.0) +
                             0.4 * std::exp(-std::pow((hour - 18.0) / 1.5, 2));
        const double load = 27000.0 + 4500.0 * winter + 7000.0 * daily - 2500.0 * weekend +
                            150.0 * std::max(0.0, 12.0 - temperature) + 900.0 * load_ar.step(rng);

        const double half_day = 5.75 - 1.75 * winter;
        const double sun_angle = (hour - 12.5) / half_day;
        const double sun = std::abs(sun_angle) < 1.0 ? std::cos(0.5 * std::numbers::pi * sun_angle) : 0.0;
        const double cloud = 0.2 + 0.8 * logistic(0.8 + 1.2 * cloud_ar.step(rng));
        const double solar = 20000.0 * sun * (0.55 - 0.35 * winter) * cloud;

        const double w1 = wind_ar.step(rng);
        const double w2 = wind_off_ar.step(rng);
        const double cf_on = logistic(-0.9 + 0.5 * winter + 1.3 * w1);
        const double cf_off = logistic(-0.5 + 0.5 * winter + 1.3 * (0.8 * w1 + 0.6 * w2));
        const double wind_on = 16000.0 * cf_on;
        const double wind_off = 26000.0 * cf_off;

        const double renewables = wind_on + wind_off + solar;
        const double share = renewables / load;
        const double coal = 1200.0 * std::clamp((load - 30000.0) / 8000.0, 0.0, 1.0) *
                            (0.8 + 0.2 * rng.uniform());

        const double ic_fr = 3000.0 * std::tanh(0.6 + 0.7 * ic_ar[0].step(rng) - 0.6 * share);
        const double ic_nl = 1000.0 * std::tanh(0.4 + 0.7 * ic_ar[1].step(rng) - 0.5 * share);
        const double ic_ie = 800.0 * std::tanh(-0.2 + 0.7 * ic_ar[2].step(rng) + 0.4 * share);
        const double ic_ew = 500.0 * std::tanh(0.7 * ic_ar[3].step(rng) + 0.3 * share);

        const std::array<double, 11> raw = {
            round_to(load, 1),    round_to(wind_on, 1), round_to(wind_off, 1),
            round_to(solar, 1),   round_to(coal, 1),    round_to(ic_fr, 1),
            round_to(ic_nl, 1),   round_to(ic_ie, 1),   round_to(ic_ew, 1),
            weekend,              round_to(temperature, 2)};

        const double proxy = raw[0] - raw[1] - raw[2] - raw[3] - raw[5] - raw[6] - raw[7] - raw[8];
        const double h_det = h_lo + gain * (proxy - kProxyLow);
        const double rel_sd = cfg.noise_scale * (1.0 + cfg.hetero_gain * std::min(share, 2.0));
        const double noise = draw_noise(rng, cfg);
        const double h = round_to(std::clamp(h_det * (1.0 + rel_sd * noise), cfg.inertia_min,
                                             cfg.inertia_max),
                                  2);

        Scenario s;
        s.timestamp = format_timestamp(day, slot);
        s.features.reserve(k + 1);
        s.features.push_back(1.0);
        s.features.insert(s.features.end(), raw.begin(), raw.begin() + static_cast<long>(k));
        s.inertia_true = h;
        s.realized_req = reserve_from_inertia(h, fp, false);
        out.scenarios.push_back(std::move(s));
    }
    apply_chronological_split(out, cfg.test_count);
    return out;
}

void write_csv(const Dataset& data, std::ostream& out) {
    out << "timestamp";
    for (const auto& name : data.feature_names) out << ',' << name;
    out << ",inertia_true,realized_req\n";
    for (const auto& s : data.scenarios) {
        out << s.timestamp;
        for (double v : s.features) out << ',' << format_double(v);
        out << ',' << format_double(s.inertia_true) << ',' << format_double(s.realized_req) << '\n';
    }
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(data, out);
    if (!out) throw DataError("write failed for " + path.string());
}

Dataset read_csv(std::istream& in, const FrequencyParams& fp, std::size_t test_count,
                 const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(source + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_csv_line(line);
    if (header.empty() || header.front() != "timestamp") {
        throw DataError(source + ": header must start with 'timestamp'");
    }
    const auto inertia_it = std::find(header.begin(), header.end(), "inertia_true");
    if (inertia_it == header.end()) throw DataError(source + ": header lacks 'inertia_true'");
    const auto inertia_col = static_cast<std::size_t>(inertia_it - header.begin());
    bool has_req = false;
    if (inertia_col + 1 < header.size()) {
        if (inertia_col + 2 != header.size() || header[inertia_col + 1] != "realized_req") {
            throw DataError(source + ": only 'realized_req' may follow 'inertia_true'");
        }
        has_req = true;
    }
    if (inertia_col < 2) throw DataError(source + ": at least one feature column is required");

    Dataset data;
    data.feature_names.assign(header.begin() + 1, header.begin() + static_cast<long>(inertia_col));

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const auto cells = split_csv_line(line);
        const std::string where = source + ": row " + std::to_string(row);
        if (cells.size() != header.size()) {
            throw DataError(where + ": expected " + std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()));
        }
        Scenario s;
        s.timestamp = cells[0];
        if (s.timestamp.empty()) throw DataError(where + ", column 'timestamp': empty value");
        for (std::size_t c = 1; c < header.size(); ++c) {
            auto v = parse_double(cells[c]);
            if (!v || !std::isfinite(*v)) {
                throw DataError(where + ", column '" + header[c] + "': invalid number '" + cells[c] + "'");
            }
            if (c < inertia_col) s.features.push_back(*v);
            else if (c == inertia_col) s.inertia_true = *v;
            else s.realized_req = *v;
        }
        if (s.features.front() != 1.0) {
            throw DataError(where + ", column '" + header[1] + "': first feature must be the constant 1");
        }
        if (!(s.inertia_true > 0.0)) {
            throw DataError(where + ", column 'inertia_true': inertia must be positive");
        }
        if (!has_req) s.realized_req = reserve_from_inertia(s.inertia_true, fp, false);
        if (!(s.realized_req >= 0.0)) {
            throw DataError(where + ", column 'realized_req': must be >= 0");
        }
        data.scenarios.push_back(std::move(s));
    }
    if (data.scenarios.empty()) throw DataError(source + ": no data rows");
    apply_chronological_split(data, test_count);
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const FrequencyParams& fp, std::size_t test_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_csv(in, fp, test_count, path.string());
}

}  // namespace inertia
