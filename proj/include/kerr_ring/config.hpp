#pragma once

#include <map>
#include <string>
#include <vector>

#include "kerr_ring/model.hpp"

namespace kerr_ring {

// Flat view of an INI-style config: "[section]" headers, key = value lines,
// '#' or ';' comments. Keys are stored as "section.key". CLI --param
// overrides use the same "section.key=value" addressing.
struct RunConfig {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;   // throws ConfigError on junk
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
};

RunConfig load_config(const std::string& path);            // throws ConfigError
void apply_override(RunConfig& cfg, const std::string& kv);  // "section.key=value"

// Builds ModelParams from the [model] section; validates and throws
// ConfigError listing the violated invariants if any.
ModelParams model_from_config(const RunConfig& cfg);

// Grid helpers. grid_from_config reads either "<name>_values" (comma list)
// or "<name>_min" / "<name>_max" / "<name>_count" (+ optional bool
// "<name>_log" for log10 spacing).
std::vector<double> linspace(double lo, double hi, int count);
std::vector<double> logspace(double lo, double hi, int count);
std::vector<double> parse_double_list(const std::string& text);
std::vector<double> grid_from_config(const RunConfig& cfg, const std::string& section,
                                     const std::string& name);

} // namespace kerr_ring
