#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace inertia {

/// Flat `key = value` configuration.
///
/// Lines starting with `#` or `;` are comments. A `[section]` header prefixes
/// the keys that follow it with `section.`. Readers mark the keys they consume
/// so that `unused_keys()` can report typos.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::istream& in, const std::string& source = "<stream>");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Comma-separated list of reals.
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

    std::vector<std::string> unused_keys() const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
    std::string source_;
};

// Strict decimal parsing helpers shared by the CSV and config readers.
std::optional<double> parse_double(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace inertia
