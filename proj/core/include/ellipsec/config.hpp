#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ellipsec {

/// Flat key=value configuration.  Lines are `key = value`, `#` starts a
/// comment, blank lines are skipped.  Values keep their raw text; typed
/// getters parse on demand and report malformed values as invalid arguments.
class KeyValueConfig {
  public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    /// Accepts "inf" / "infinity" for the infinite exponent.
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    /// Comma-separated integers.
    std::vector<int> get_int_list(const std::string& key) const;

    std::vector<std::string> keys() const;

    /// Throws when a key outside the allowed set is present.
    void require_known(const std::vector<std::string>& allowed) const;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace ellipsec
