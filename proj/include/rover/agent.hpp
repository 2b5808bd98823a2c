#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rover/replay.hpp"
#include "rover/rng.hpp"

namespace rover {

class NonFiniteLossError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedAlgorithmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Knobs shared by all three learners. Fields irrelevant to a given algorithm
// (e.g. target_entropy for DDPG) are simply unused by it.
struct RlConfig {
  size_t obs_dim = 4;
  size_t act_dim = 4;
  size_t hidden = 64;  // width of both hidden layers in every head
  double gamma = 0.99;
  double tau = 0.005;
  double lr = 3e-4;
  size_t batch_size = 256;
  size_t replay_capacity = 100000;
  size_t warmup_steps = 1000;  // uniform-random action phase before learning
  // Soft actor-critic temperature.
  bool auto_alpha = true;
  double init_alpha = 1.0;
  double target_entropy = -4.0;
  // Deterministic-policy baselines.
  double explore_noise = 0.1;  // stddev of action-space exploration noise
  double policy_noise = 0.2;   // target smoothing noise stddev
  double noise_clip = 0.5;     // smoothing noise clip
  size_t policy_delay = 2;     // critic updates per policy update

  void validate() const;
};

struct UpdateStats {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double ent_coef = 0.0;  // temperature for SAC; 0 for the baselines
};

// A learner usable by the training loop: exploration policy, noise-free
// evaluation policy, and one gradient phase per call to update().
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string algo() const = 0;
  virtual std::vector<double> act(const std::vector<double>& obs, Rng& rng) = 0;
  virtual std::vector<double> act_eval(const std::vector<double>& obs) const = 0;
  virtual UpdateStats update(const ReplayPool& pool, Rng& rng) = 0;
  virtual void save(std::ostream& out) const = 0;
  virtual void load(std::istream& in) = 0;
  const RlConfig& config() const { return cfg_; }

 protected:
  explicit Agent(const RlConfig& cfg) : cfg_(cfg) { cfg_.validate(); }
  RlConfig cfg_;
};

// Builds a fresh agent. Throws UnsupportedAlgorithmError for names other than
// "sac", "ddpg", "td3".
std::unique_ptr<Agent> make_agent(const std::string& algo, const RlConfig& cfg, Rng& rng);

// Shared Bellman target: y_i = r_i + gamma * (1 - done_i) * next_value_i.
std::vector<double> bellman_targets(const std::vector<const Transition*>& batch,
                                    const std::vector<double>& next_values, double gamma);

}  // namespace rover
