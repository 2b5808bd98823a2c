#pragma once

#include <vector>

#include "rover/mlp.hpp"
#include "rover/rng.hpp"

namespace rover {

// Building blocks shared by the actor-critic learners.

// A squashed-Gaussian policy head: the network maps obs -> [means, log_stds]
// (output size 2 * act_dim). Actions are tanh(mean + std * eps) with the
// change-of-variables correction folded into log_prob.
struct SampledAction {
  std::vector<double> action;
  std::vector<double> pre_tanh;
  double log_prob = 0.0;
};

constexpr double kLogStdMin = -20.0;
constexpr double kLogStdMax = 2.0;

double softplus(double x);
// log(1 - tanh(x)^2) without catastrophic cancellation at large |x|.
double log_one_minus_tanh_sq(double x);

// Draws eps ~ N(0, I) internally.
SampledAction sample_policy_action(const Mlp& policy, const std::vector<double>& obs, Rng& rng);

// Same with caller-supplied noise (one eps per action dimension); the
// deterministic path used by gradient checks.
SampledAction sample_policy_action_with_noise(const Mlp& policy, const std::vector<double>& obs,
                                              const std::vector<double>& eps);

// Noise-free evaluation action: tanh of the mean head.
std::vector<double> policy_mean_action(const Mlp& policy, const std::vector<double>& obs);

// target <- tau * source + (1 - tau) * target, elementwise.
void polyak_update(Mlp& target, const Mlp& source, double tau);

// Mean squared error of critic(inputs[i]) against targets[i]; critic outputs
// are scalar. Accumulates the parameter gradient when grads is non-null.
double critic_mse_objective(const Mlp& critic, const std::vector<std::vector<double>>& inputs,
                            const std::vector<double>& targets, MlpGrads* grads);

// Evaluates a scalar-output critic on concat(obs, action).
double critic_value(const Mlp& critic, const std::vector<double>& obs,
                    const std::vector<double>& action);

std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rover
