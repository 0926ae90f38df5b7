#include "dirtopo/config.hpp"

#include <fstream>
#include <sstream>

namespace dirtopo {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::parse(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str());
}

Config Config::parse_text(const std::string& text) {
    Config config;
    config.text_ = text;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ParseError("empty section name", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        config.sections_[section][key] = value;
    }
    return config;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse(in);
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string raw = get_string(section, key, "");
    try {
        std::size_t used = 0;
        const long value = std::stol(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return value;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": '" + raw + "' is not an integer");
    }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string raw = get_string(section, key, "");
    try {
        std::size_t used = 0;
        const double value = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return value;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": '" + raw + "' is not a number");
    }
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string raw = get_string(section, key, "");
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw ConfigError("[" + section + "] " + key + ": '" + raw + "' is not a boolean");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
    if (!has(section, key)) return fallback;
    const std::string raw = get_string(section, key, "");
    std::istringstream in(raw);
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "] " + key + ": '" + token + "' is not a number");
        }
    }
    if (values.empty()) throw ConfigError("[" + section + "] " + key + ": empty list");
    return values;
}

std::vector<long> Config::get_ints(const std::string& section, const std::string& key,
                                   std::vector<long> fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<long> values;
    for (double v : get_doubles(section, key, {})) {
        const long i = static_cast<long>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError("[" + section + "] " + key + ": expected integers");
        values.push_back(i);
    }
    return values;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

}  // namespace dirtopo
