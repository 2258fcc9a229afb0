#include "rbmarket/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rbmarket {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    return parse(is, path);
}

KeyValueFile KeyValueFile::parse(std::istream& is, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": expected `key = value`, got `" << line << "`";
            throw ConfigError(msg.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": empty key";
            throw ConfigError(msg.str());
        }
        if (!kv.entries_.emplace(key, value).second) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": duplicate key `" << key << "`";
            throw ConfigError(msg.str());
        }
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

std::string KeyValueFile::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(origin_ + ": missing required key `" + key + "`");
    }
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key,
                                 const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KeyValueFile::parse_double(const std::string& key, const std::string& raw) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || !trim(end).empty() || errno == ERANGE) {
        throw ConfigError(origin_ + ": key `" + key + "` is not a number: `" + raw + "`");
    }
    return v;
}

std::int64_t KeyValueFile::parse_int(const std::string& key, const std::string& raw) const {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end == raw.c_str() || !trim(end).empty() || errno == ERANGE) {
        throw ConfigError(origin_ + ": key `" + key + "` is not an integer: `" + raw + "`");
    }
    return v;
}

double KeyValueFile::get_double(const std::string& key) const {
    return parse_double(key, get(key));
}

double KeyValueFile::get_double_or(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_double(key, it->second);
}

std::int64_t KeyValueFile::get_int(const std::string& key) const {
    return parse_int(key, get(key));
}

std::int64_t KeyValueFile::get_int_or(const std::string& key,
                                      std::int64_t fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_int(key, it->second);
}

bool KeyValueFile::get_bool_or(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(origin_ + ": key `" + key + "` is not a boolean: `" + v + "`");
}

std::vector<double> KeyValueFile::get_doubles_or(const std::string& key,
                                                 std::vector<double> fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<double> out;
    for (const auto& item : split_commas(it->second)) {
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::vector<std::string> KeyValueFile::get_strings_or(
    const std::string& key, std::vector<std::string> fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<std::string> out;
    for (auto& item : split_commas(it->second)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace rbmarket
