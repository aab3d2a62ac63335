// Strict key-value run configuration: unknown keys are fatal and all
// violations are reported together.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cssrad/field.hpp"

namespace cssrad {

struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ConfigError(std::vector<std::string> v)
        : std::runtime_error(v.empty() ? "invalid configuration" : v.front()),
          violations(std::move(v)) {}
};

// Parsed "key = value" document ('#' starts a comment, blank lines ignored).
class KeyValueDoc {
public:
    static KeyValueDoc parse_text(const std::string& text, std::vector<std::string>& errors);
    static KeyValueDoc parse_file(const std::string& path, std::vector<std::string>& errors);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    const std::map<std::string, std::pair<std::string, int>>& entries() const {
        return entries_;
    }

private:
    // key -> (value, line number)
    std::map<std::string, std::pair<std::string, int>> entries_;
};

// Typed, range-checked access with a consumed-key ledger; finish() flags
// everything that was never requested.
class ConfigReader {
public:
    ConfigReader(const KeyValueDoc& doc, std::vector<std::string>& errors);

    int get_int(const std::string& key, int def, int min, int max);
    double get_double(const std::string& key, double def,
                      const std::function<bool(double)>& valid, const std::string& range_msg);
    std::uint64_t get_seed(const std::string& key, std::uint64_t def);
    std::string get_enum(const std::string& key, const std::string& def,
                         const std::vector<std::string>& allowed);
    bool get_bool(const std::string& key, bool def);
    std::string get_string(const std::string& key, const std::string& def);

    void finish(); // report unknown keys

private:
    std::optional<std::string> raw(const std::string& key);
    const KeyValueDoc& doc_;
    std::vector<std::string>& errors_;
    std::vector<std::string> consumed_;
};

// Initial-data presets shared by the simulate and diagnostic drivers.
struct InitialData {
    std::string name;                        // gaussian | ring | indicator
    std::map<std::string, double> params;
    std::function<cplx(double)> profile;
};

InitialData make_preset(const std::string& name, const std::map<std::string, double>& params,
                        std::vector<std::string>& errors);

} // namespace cssrad
