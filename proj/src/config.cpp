#include "safecritic/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "safecritic/errors.hpp"

namespace sc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str(), path);
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected `key = value`, got: " + t);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": duplicate key: " + key);
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string Config::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required key: " + key);
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError(origin_ + ": key " + key + ": not a number: " + it->second);
    return v;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    char* end = nullptr;
    const long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError(origin_ + ": key " + key + ": not an integer: " + it->second);
    return v;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
    const std::int64_t v = get_int(key, static_cast<std::int64_t>(fallback));
    if (v < 0)
        throw ConfigError(origin_ + ": key " + key + ": must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError(origin_ + ": key " + key + ": not a boolean: " + v);
}

void Config::check_known(const std::set<std::string>& known) const {
    std::string bad;
    for (const auto& [key, value] : entries_)
        if (!known.count(key)) bad += bad.empty() ? key : ", " + key;
    if (!bad.empty())
        throw ConfigError(origin_ + ": unknown config key(s): " + bad);
}

}  // namespace sc
