#pragma once

#include "rover/adam.hpp"
#include "rover/agent.hpp"
#include "rover/policy_ops.hpp"

namespace rover {

// Deterministic policy gradient baseline: tanh-squashed deterministic actor,
// single critic, target networks for both, additive Gaussian exploration.
class DdpgAgent : public Agent {
 public:
  DdpgAgent(const RlConfig& cfg, Rng& rng);

  std::string algo() const override { return "ddpg"; }
  std::vector<double> act(const std::vector<double>& obs, Rng& rng) override;
  std::vector<double> act_eval(const std::vector<double>& obs) const override;
  UpdateStats update(const ReplayPool& pool, Rng& rng) override;
  void save(std::ostream& out) const override;
  void load(std::istream& in) override;

  std::vector<double> critic_targets(const std::vector<const Transition*>& batch) const;
  double critic_update(const std::vector<const Transition*>& batch);
  double policy_update(const std::vector<const Transition*>& batch);

  Mlp policy, policy_target, q1, q1_target;
  AdamState policy_opt, q1_opt;
};

// Deterministic actor's action for a raw (pre-tanh) policy network.
std::vector<double> deterministic_action(const Mlp& policy, const std::vector<double>& obs);

// Objective -mean_i Q(s_i, tanh(policy(s_i))); accumulates the policy
// gradient when grads is non-null.
double deterministic_policy_objective(const Mlp& policy, const Mlp& critic,
                                      const std::vector<std::vector<double>>& obs_batch,
                                      MlpGrads* grads);

}  // namespace rover
