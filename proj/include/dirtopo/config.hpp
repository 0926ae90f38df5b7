#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dirtopo/errors.hpp"

namespace dirtopo {

/// Sectioned key/value text config:
///   [section]
///   key = value            # trailing comments allowed
/// Values may be scalars or space-separated lists.
class Config {
  public:
    static Config parse(std::istream& in);
    static Config parse_text(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const;
    std::vector<long> get_ints(const std::string& section, const std::string& key,
                               std::vector<long> fallback) const;

    /// The verbatim config text, used for hashing and archival.
    const std::string& text() const { return text_; }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string text_;
};

std::uint64_t fnv1a_hash(const std::string& text);
std::string hash_hex(std::uint64_t value);

}  // namespace dirtopo
