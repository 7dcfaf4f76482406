#include "sevo/config.hpp"

#include <charconv>
#include <limits>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sevo {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    if (s == "inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && p == e;
}

Config::Value parse_value(const std::string& raw, int line_no) {
    const std::string v = trim(raw);
    if (v.empty()) throw std::runtime_error("config: empty value at line " + std::to_string(line_no));
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw std::runtime_error("config: unterminated string at line " +
                                     std::to_string(line_no));
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '[') {
        if (v.back() != ']')
            throw std::runtime_error("config: unterminated array at line " +
                                     std::to_string(line_no));
        std::vector<double> nums;
        std::vector<std::string> strs;
        bool string_array = false;
        std::string body = v.substr(1, v.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            if (item.front() == '"') {
                string_array = true;
                strs.push_back(item.substr(1, item.size() - 2));
            } else {
                double d;
                if (!parse_number(item, d))
                    throw std::runtime_error("config: bad array element at line " +
                                             std::to_string(line_no));
                nums.push_back(d);
            }
        }
        if (string_array) return strs;
        return nums;
    }
    double d;
    if (!parse_number(v, d))
        throw std::runtime_error("config: cannot parse value '" + v + "' at line " +
                                 std::to_string(line_no));
    return d;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::stringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: bad section header at line " +
                                         std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at line " +
                                     std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("config: empty key at line " + std::to_string(line_no));
        const std::string full = section.empty() ? key : section + "." + key;
        cfg.values_[full] = parse_value(line.substr(eq + 1), line_no);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

double Config::number(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const double* d = std::get_if<double>(&it->second)) return *d;
    throw std::runtime_error("config: key '" + key + "' is not a number");
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long long Config::integer(const std::string& key) const {
    const double d = number(key);
    const long long v = static_cast<long long>(d);
    if (static_cast<double>(v) != d)
        throw std::runtime_error("config: key '" + key + "' is not an integer");
    return v;
}

long long Config::integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const bool* b = std::get_if<bool>(&it->second)) return *b;
    throw std::runtime_error("config: key '" + key + "' is not a boolean");
}

std::string Config::str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
    throw std::runtime_error("config: key '" + key + "' is not a string");
}

std::string Config::str_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
}

std::vector<double> Config::number_list(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    if (const double* d = std::get_if<double>(&it->second)) return {*d};
    throw std::runtime_error("config: key '" + key + "' is not a number array");
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, p - buf);
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += " = ";
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, double>) {
                    out += format_double(x);
                } else if constexpr (std::is_same_v<T, bool>) {
                    out += x ? "true" : "false";
                } else if constexpr (std::is_same_v<T, std::string>) {
                    out += '"' + x + '"';
                } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    out += '[';
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        if (i) out += ", ";
                        out += format_double(x[i]);
                    }
                    out += ']';
                } else {
                    out += '[';
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        if (i) out += ", ";
                        out += '"' + x[i] + '"';
                    }
                    out += ']';
                }
            },
            v);
        out += '\n';
    }
    return out;
}

std::string Config::digest() const {
    const std::string c = canonical();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : c) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

}  // namespace sevo
