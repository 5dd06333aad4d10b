#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace sc {

// Flat `key = value` text config. Lines starting with '#' and blank lines
// are ignored. Unknown keys are hard errors (catches typos): callers list
// the accepted keys via check_known() after reading everything they use.
class Config {
public:
    static Config load(const std::string& path);
    static Config parse(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Throws ConfigError naming every key not in `known`.
    void check_known(const std::set<std::string>& known) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    std::string origin_;
};

}  // namespace sc
