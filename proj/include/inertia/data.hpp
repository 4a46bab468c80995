#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "inertia/config.hpp"
#include "inertia/market.hpp"

namespace inertia {

struct Scenario {
    std::string timestamp;        // ISO-8601, UTC
    std::vector<double> features; // features[0] == 1 (intercept)
    double inertia_true = 0.0;    // MW*s
    double realized_req = 0.0;    // MW

    bool operator==(const Scenario&) const = default;
};

enum class Split { train, test };

struct Dataset {
    std::vector<Scenario> scenarios;
    std::vector<std::string> feature_names;  // includes "intercept"
    std::vector<Split> split;                // one tag per scenario

    std::size_t size() const { return scenarios.size(); }
    std::size_t dim() const { return feature_names.size(); }

    // Throws DataError on any invariant violation.
    void validate() const;

    // Scenarios carrying the given tag, in order, all re-tagged as `which`.
    Dataset subset(Split which) const;

    bool operator==(const Dataset&) const = default;
};

// Tags the last `test_count` scenarios as test and the rest as train.
void apply_chronological_split(Dataset& data, std::size_t test_count);

enum class NoiseDistribution { gaussian, student_t, uniform };

/// Parameters of the synthetic half-hourly generator.
///
/// Inertia is an affine function of a synchronous-generation proxy
/// (load minus renewables minus imports) plus zero-mean noise whose standard
/// deviation grows with the renewable share of demand. Values are clipped to
/// [inertia_min, inertia_max].
struct GeneratorConfig {
    double inertia_min = 2000.0;
    double inertia_max = 10000.0;
    double noise_scale = 0.02;    // relative noise s.d. at zero renewable share
    double hetero_gain = 1.0;     // extra relative s.d. per unit of renewable share
    int n_features = 11;          // leading generator features kept (1..11)
    NoiseDistribution noise_dist = NoiseDistribution::gaussian;
    double noise_trunc = 3.0;     // |z| bound for gaussian noise, 0 disables
    int tail_dof = 3;             // student_t degrees of freedom
    std::uint64_t seed = 2028;
    std::size_t test_count = 336;
    std::string start = "2028-01-01";

    void validate() const;

    // Keys `<prefix>name` present in `kv` override `base`.
    static GeneratorConfig from_config(const KeyValueConfig& kv, const GeneratorConfig& base,
                                       const std::string& prefix = "");
    static GeneratorConfig load(const std::filesystem::path& path);
};

NoiseDistribution parse_noise_distribution(const std::string& name);
std::string to_string(NoiseDistribution d);

// All feature names the generator can emit, in emission order (no intercept).
const std::vector<std::string>& generator_feature_names();

Dataset generate_synthetic(std::size_t n, std::uint64_t seed, const GeneratorConfig& cfg,
                           const FrequencyParams& fp = {});

// CSV: timestamp,<features...>,inertia_true[,realized_req]. The split is not
// stored; the last `test_count` rows are tagged test on load.
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_csv(std::istream& in, const FrequencyParams& fp, std::size_t test_count = 0,
                 const std::string& source = "<stream>");
Dataset load_csv(const std::filesystem::path& path, const FrequencyParams& fp,
                 std::size_t test_count = 0);

}  // namespace inertia
