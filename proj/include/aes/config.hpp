#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "aes/scenario.hpp"

namespace aes {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Baseline configuration: the stock simulation settings with the tuned
/// (alpha, beta, k) defaults.
ScenarioConfig baseline_config();

/// Built-in setups: 1 = linear motion (omega = 0), 2 = rotational motion
/// (w_l = 0), 3 = combined linear + rotational. Throws ConfigError for any
/// other id.
ScenarioConfig setup_config(int setup);

/// Parse a flat key = value config (# comments, blank lines allowed).
/// Unknown keys are hard errors. Omitted keys keep the baseline defaults;
/// w1 defaults to 1/N after rows/cols are known.
ScenarioConfig parse_config_text(std::string_view text);

/// Load and parse a config file. Throws ConfigError with the file name and
/// line number on failure.
ScenarioConfig load_config_file(const std::string& path);

/// Serialize every key, fully resolved; parse_config_text round-trips it.
std::string config_to_text(const ScenarioConfig& config);

enum class WeightPreset { defaults, force, align };

/// defaults: w1 = 1/N, w2 = -1; force: w1 = 10/N, w2 = -1;
/// align: w1 = 1/N, w2 = -10.
void apply_weight_preset(ScenarioConfig& config, WeightPreset preset);

}  // namespace aes
