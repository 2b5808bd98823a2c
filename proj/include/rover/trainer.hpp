#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rover/agent.hpp"
#include "rover/env.hpp"
#include "rover/replay.hpp"

namespace rover {

struct MetricsRow {
  size_t step = 0;
  double ep_rew_mean = 0.0;  // mean return over the last 20 finished episodes
  double ep_len_mean = 0.0;  // mean length over the same window
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double ent_coef = 0.0;
};

struct RunMetrics {
  std::vector<MetricsRow> rows;
  // Per finished episode, in order.
  std::vector<double> episode_returns;
  std::vector<size_t> episode_lengths;
  std::vector<bool> episode_crossed;
};

struct TrainOptions {
  size_t total_steps = 100000;
  uint64_t seed = 0;
  size_t log_period = 500;
  // Called after each logged row (progress reporting); may be empty.
  std::function<void(const MetricsRow&)> on_log;
};

// Derives a stream-specific seed from a master seed (splitmix64 steps), so
// episode resets, action noise, and batch sampling stay decoupled and
// reproducible.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

// Runs the interaction/gradient loop: uniform-random actions for the warmup
// prefix, one agent update per environment step afterwards. Deterministic for
// a fixed (agent initial state, options.seed).
RunMetrics train_agent(Agent& agent, Environment& env, TrainOptions options);

}  // namespace rover
