#pragma once

// Flat key=value configuration for the command-line front end. A config file
// seeds the settings; command-line flags override individual keys; the
// effective configuration is echoed into every output.

#include <cstdint>
#include <optional>
#include <string>

#include "rodbench/policy.hpp"

namespace rodbench {

struct HarnessConfig {
  // Engine.
  KineticsParams params;
  RodBankConfig bank1{WorthCurve{1500.0, 180.0, WorthShape::s_curve}, 180.0};
  RodBankConfig bank2{WorthCurve{1500.0, 180.0, WorthShape::linear}, 100.0};

  // Run settings.
  RunConfig run;

  // Corpus settings.
  std::size_t size = 1000;
  std::uint64_t seed = 42;
  MixtureWeights mixture;

  // Policy settings.
  std::string policy = "oracle";
  int knn_k = 1;
  std::optional<double> proportional_gain;  // unset: calibrate
  std::string external_cmd;                 // shell-split argv
  double timeout_s = 30.0;

  // Output.
  std::string out_dir = ".";

  Engine make_engine() const;
  PolicyOptions policy_options() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Applies one key=value setting; throws ConfigError on unknown keys or
// malformed values. The full key list is documented in the README and in
// effective_config_text output.
void apply_config_kv(HarnessConfig& cfg, const std::string& key,
                     const std::string& value);

// Loads a config file: one key=value per line, '#' comments, blank lines
// ignored.
HarnessConfig load_config(const std::string& path);

// Canonical echo of every effective setting, one key=value per line.
std::string effective_config_text(const HarnessConfig& cfg);

// Whitespace-splitting with double-quote grouping for external_cmd values.
std::vector<std::string> split_command(const std::string& cmd);

}  // namespace rodbench
