#pragma once

#include "hlg/errors.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hlg {

// Flat key-value configuration with [sections]; '#' starts a comment. Keys
// are addressed as "section.key". Typed getters throw ConfigError with the
// offending key in the message.
class Config {
  public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int_or(const std::string& key, long fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    std::uint64_t get_seed(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

} // namespace hlg
