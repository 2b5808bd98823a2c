#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rover/agent.hpp"
#include "rover/env.hpp"

namespace rover {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a run needs, resolvable from defaults, a config file, and
// command-line overrides (in that order).
struct RunConfig {
  std::string algo = "sac";
  std::string suspension = "active";
  uint64_t total_steps = 100000;
  uint64_t seed = 0;
  std::string out_dir = "run_out";
  uint64_t log_period = 500;
  double height = 0.32;    // obstacle height for eval/compare
  uint64_t episodes = 20;  // evaluation episode count

  EpisodeConfig episode;
  PidGains pid;
  BodyParams physics;
  MechanismConfig mechanism;
  RlConfig rl;

  void validate() const;
};

// Applies one `key = value` assignment; unknown keys and malformed values
// throw ConfigError.
void apply_config_kv(RunConfig& config, const std::string& key, const std::string& value);

// Parses a config file: one `key = value` per line, `#` comments, blank lines
// ignored.
RunConfig load_config_file(const std::string& path);
void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin);

// Full effective configuration, one key per line, fixed order, values
// rendered so they parse back to the identical doubles.
std::string render_config(const RunConfig& config);

// Shortest decimal rendering of v that round-trips exactly.
std::string format_roundtrip(double v);

}  // namespace rover
