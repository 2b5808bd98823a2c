#pragma once

#include "rover/adam.hpp"
#include "rover/agent.hpp"
#include "rover/policy_ops.hpp"

namespace rover {

// Twin-delayed deterministic policy gradient baseline: two critics with min
// bootstrap, clipped target-policy smoothing noise, delayed policy updates.
class Td3Agent : public Agent {
 public:
  Td3Agent(const RlConfig& cfg, Rng& rng);

  std::string algo() const override { return "td3"; }
  std::vector<double> act(const std::vector<double>& obs, Rng& rng) override;
  std::vector<double> act_eval(const std::vector<double>& obs) const override;
  UpdateStats update(const ReplayPool& pool, Rng& rng) override;
  void save(std::ostream& out) const override;
  void load(std::istream& in) override;

  // Smoothed target actions: clip(tanh(policy_target(s')) + clipped noise).
  std::vector<double> smoothed_target_action(const std::vector<double>& next_obs, Rng& rng) const;
  std::vector<double> critic_targets(const std::vector<const Transition*>& batch, Rng& rng) const;
  double critic_update(const std::vector<const Transition*>& batch, Rng& rng);
  double policy_update(const std::vector<const Transition*>& batch);

  Mlp policy, policy_target, q1, q2, q1_target, q2_target;
  AdamState policy_opt, q1_opt, q2_opt;
  size_t update_count = 0;

 private:
  double last_actor_loss_ = 0.0;
};

}  // namespace rover
