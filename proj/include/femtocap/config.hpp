// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "femtocap/qoscap.hpp"
#include "femtocap/scenario.hpp"

namespace femtocap {

/// A named, uniform-over-sub-channels QoS target.
struct QosSetting {
  std::string name;
  QosSpec spec;
};

/// Everything one experiment run needs. Serialized as a flat JSON object with
/// dB/dBm units; linear units only exist after PowerConfig::from.
struct Config {
  ScenarioConfig scenario;
  /// The first entry is the primary setting (fig2.csv proposed column, validate-qos gate).
  std::vector<QosSetting> qos{{"tight", {0.93, 0.01}}, {"loose", {0.5, 0.10}}};
  IbarMode ibar_mode = IbarMode::Approx;
  std::uint64_t seed = 42;
  std::size_t reps = 20;
  std::size_t fading_trials = 2000;  ///< fresh fading draws per macro user for violation counts
  std::size_t threads = 0;           ///< 0: hardware concurrency
  bool femto_enabled = true;
  double cap_scale = 1.0;  ///< multiplies every cap; 1 outside of stress tests
  std::string out_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

std::string to_string(IbarMode mode);
IbarMode parse_ibar_mode(const std::string& text);

/// Pretty-printed flat JSON.
std::string serialize_config(const Config& config);

/// Parses and validates; unknown keys are rejected, missing keys keep defaults.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// FNV-1a over the serialized form, as 16 hex digits. out_dir and threads do not
/// change results and are left out.
std::string config_hash(const Config& config);

/// One line per key, for --help.
std::string describe_config_keys();

}  // namespace femtocap
