#pragma once

// Run configuration: an INI file with [epochs], [engine], [profile], [run] and
// [synth] sections. Every key is optional and defaults to the standard
// parametrisation; unknown keys are rejected.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatigue/engine.hpp"
#include "fatigue/kpi.hpp"
#include "fatigue/risk.hpp"
#include "fatigue/sleep.hpp"
#include "fatigue/synth.hpp"

namespace fatigue {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // [epochs] set = 30d | 15d | custom; custom entries are LABEL = YYYY-MM-DD,days
    std::string epoch_set = "30d";
    std::vector<Epoch> epochs = standard_epochs_30d();
    EngineParams engine;
    BehaviorProfile profile;
    KpiOptions kpi;
    DutyPolicy duty;
    FilterPolicy filter;
    std::string airports_path;  // optional code,country table
    RiskParam risk;
    // Fit bins with x above this value are pooled into one point.
    std::optional<int> pool_above;
    int jobs = 1;
    SynthConfig synth;
};

// override strings take the form "section.key=value" and are applied after the
// file. An empty path loads the defaults.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides = {});

// Resolved configuration in a fixed key order; identical configs give
// identical text.
std::string canonical_ini(const RunConfig& config);

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string config_hash(const RunConfig& config);

}  // namespace fatigue
