#pragma once

#include "rover/adam.hpp"
#include "rover/agent.hpp"
#include "rover/policy_ops.hpp"

namespace rover {

// Soft actor-critic: squashed-Gaussian policy, twin critics with min
// bootstrap, and a temperature optimized in log space against a fixed
// entropy target.
class SacAgent : public Agent {
 public:
  SacAgent(const RlConfig& cfg, Rng& rng);

  std::string algo() const override { return "sac"; }
  std::vector<double> act(const std::vector<double>& obs, Rng& rng) override;
  std::vector<double> act_eval(const std::vector<double>& obs) const override;
  UpdateStats update(const ReplayPool& pool, Rng& rng) override;
  void save(std::ostream& out) const override;
  void load(std::istream& in) override;

  double alpha() const;

  // One optimizer step each; split out so the pieces are testable in
  // isolation. Each returns the loss it minimized.
  std::vector<double> critic_targets(const std::vector<const Transition*>& batch, Rng& rng) const;
  double critic_update(const std::vector<const Transition*>& batch, Rng& rng);
  double policy_update(const std::vector<const Transition*>& batch, Rng& rng);
  double temperature_update(const std::vector<const Transition*>& batch, Rng& rng);

  Mlp policy, q1, q2, q1_target, q2_target;
  double log_alpha = 0.0;
  AdamState policy_opt, q1_opt, q2_opt;
  AdamScalar alpha_opt;
};

// Single-sample estimate of the soft state value:
// min(Q1(s,a), Q2(s,a)) - alpha * log pi(a|s) with a ~ pi(.|s).
double soft_state_value(const Mlp& q1, const Mlp& q2, const Mlp& policy, double alpha,
                        const std::vector<double>& obs, Rng& rng);

// Reparameterized actor objective mean_i(alpha * log pi(a_i|s_i) - min Q(s_i, a_i))
// with caller-fixed noise; accumulates the policy-parameter gradient when
// grads is non-null.
double sac_policy_objective(const Mlp& policy, const Mlp& q1, const Mlp& q2, double alpha,
                            const std::vector<std::vector<double>>& obs_batch,
                            const std::vector<std::vector<double>>& eps_batch, MlpGrads* grads);

// Temperature dual objective mean_i(-alpha * (log_prob_i + target_entropy))
// as a function of log_alpha; writes its derivative with respect to log_alpha
// when grad is non-null.
double alpha_objective(double log_alpha, const std::vector<double>& log_probs,
                       double target_entropy, double* grad);

}  // namespace rover
