#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rover/agent.hpp"
#include "rover/config.hpp"
#include "rover/env.hpp"

namespace rover {

// One noise-free evaluation episode at the configured fixed obstacle height.
struct EvalEpisode {
  bool success = false;
  double episode_return = 0.0;
  size_t steps = 0;
  double peak_pitch_deg = 0.0;  // max |pitch| at physics resolution
  double mean_velocity = 0.0;   // mean forward speed over the episode
  // One row per agent step: time, pitch deg, velocity, q3, q4, reward.
  std::vector<std::array<double, 6>> trace;
};

EvalEpisode run_eval_episode(Agent& agent, const RunConfig& config, uint64_t seed);

struct EvalSummary {
  double success_rate = 0.0;
  double peak_pitch_deg = 0.0;  // worst across episodes
  double mean_velocity = 0.0;   // averaged across episodes
  std::vector<EvalEpisode> episodes;
};

EvalSummary run_evaluation(Agent& agent, const RunConfig& config);

// Paired active (trained policy) and passive (torsion springs) rollouts at
// the same height and seed, run termination-free over a fixed horizon so the
// full transient is captured either side of the 20-degree line.
struct CompareTrace {
  std::vector<double> time;
  std::vector<double> pitch_active;   // deg
  std::vector<double> pitch_passive;  // deg
  std::vector<double> vel_active;     // m/s
  std::vector<double> vel_passive;    // m/s
  double peak_pitch_active_deg = 0.0;
  double peak_pitch_passive_deg = 0.0;
  bool passive_rebound = false;      // any negative passive velocity sample
  double mean_vel_active = 0.0;      // over the active crossing window
  bool active_crossed = false;
  bool passive_crossed = false;
};

CompareTrace run_comparison(Agent& agent, const RunConfig& config, uint64_t seed);

}  // namespace rover
