#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbmarket {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Flat `key = value` files: one pair per line, `#` starts a comment, blank
// lines ignored, whitespace around keys and values trimmed. Duplicate keys
// are an error, as is reading a missing key without a default.
class KeyValueFile {
  public:
    KeyValueFile() = default;

    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse(std::istream& is, const std::string& origin);

    bool has(const std::string& key) const;

    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;

    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;

    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;

    bool get_bool_or(const std::string& key, bool fallback) const;

    // Comma-separated values.
    std::vector<double> get_doubles_or(const std::string& key,
                                       std::vector<double> fallback) const;
    std::vector<std::string> get_strings_or(const std::string& key,
                                            std::vector<std::string> fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    const std::string& origin() const { return origin_; }

  private:
    double parse_double(const std::string& key, const std::string& raw) const;
    std::int64_t parse_int(const std::string& key, const std::string& raw) const;

    std::map<std::string, std::string> entries_;
    std::string origin_ = "<empty>";
};

}  // namespace rbmarket
