#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sevo {

/// Flat key-value configuration parsed from a TOML-style document:
/// [section] headers, `key = value` lines, values being numbers,
/// quoted strings, booleans, or arrays of numbers/strings. Keys are
/// addressed as "section.key".
class Config {
  public:
    using Value = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long long integer(const std::string& key) const;
    long long integer_or(const std::string& key, long long fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    std::string str(const std::string& key) const;
    std::string str_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> number_list(const std::string& key) const;
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    void set(const std::string& key, Value v) { values_[key] = std::move(v); }

    /// Sorted, normalized dump used for reproducibility digests and the
    /// resolved-config artifact.
    std::string canonical() const;

    /// FNV-1a 64-bit digest of the canonical dump, as hex.
    std::string digest() const;

  private:
    std::map<std::string, Value> values_;
};

/// Shortest round-trip decimal form of a double (locale-independent).
std::string format_double(double v);

}  // namespace sevo
