#include "rover/policy_ops.hpp"

#include <algorithm>
#include <cmath>

namespace rover {

namespace {
constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)
}  // namespace

double softplus(double x) {
  if (x > 30.0) return x;
  return std::log1p(std::exp(x));
}

double log_one_minus_tanh_sq(double x) {
  return 2.0 * (std::log(2.0) - x - softplus(-2.0 * x));
}

SampledAction sample_policy_action(const Mlp& policy, const std::vector<double>& obs, Rng& rng) {
  const size_t act_dim = policy.output_size() / 2;
  std::vector<double> eps(act_dim);
  for (double& e : eps) e = rng.normal();
  return sample_policy_action_with_noise(policy, obs, eps);
}

SampledAction sample_policy_action_with_noise(const Mlp& policy, const std::vector<double>& obs,
                                              const std::vector<double>& eps) {
  const std::vector<double> head = mlp_forward(policy, obs);
  const size_t act_dim = head.size() / 2;
  if (eps.size() != act_dim) throw DimensionMismatchError("noise/action dimension mismatch");
  SampledAction out;
  out.action.resize(act_dim);
  out.pre_tanh.resize(act_dim);
  double logp = 0.0;
  for (size_t i = 0; i < act_dim; ++i) {
    const double mean = head[i];
    const double log_std = std::clamp(head[act_dim + i], kLogStdMin, kLogStdMax);
    const double std_dev = std::exp(log_std);
    const double pre = mean + std_dev * eps[i];
    out.pre_tanh[i] = pre;
    out.action[i] = std::tanh(pre);
    logp += -0.5 * eps[i] * eps[i] - log_std - kHalfLog2Pi - log_one_minus_tanh_sq(pre);
  }
  out.log_prob = logp;
  return out;
}

std::vector<double> policy_mean_action(const Mlp& policy, const std::vector<double>& obs) {
  const std::vector<double> head = mlp_forward(policy, obs);
  const size_t act_dim = head.size() / 2;
  std::vector<double> action(act_dim);
  for (size_t i = 0; i < act_dim; ++i) action[i] = std::tanh(head[i]);
  return action;
}

void polyak_update(Mlp& target, const Mlp& source, double tau) {
  if (target.sizes != source.sizes) throw DimensionMismatchError("target/source shape mismatch");
  for (size_t l = 0; l < target.layer_count(); ++l) {
    for (size_t i = 0; i < target.w[l].size(); ++i)
      target.w[l][i] = tau * source.w[l][i] + (1.0 - tau) * target.w[l][i];
    for (size_t i = 0; i < target.b[l].size(); ++i)
      target.b[l][i] = tau * source.b[l][i] + (1.0 - tau) * target.b[l][i];
  }
}

double critic_mse_objective(const Mlp& critic, const std::vector<std::vector<double>>& inputs,
                            const std::vector<double>& targets, MlpGrads* grads) {
  if (inputs.size() != targets.size() || inputs.empty())
    throw DimensionMismatchError("inputs/targets size mismatch");
  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  double loss = 0.0;
  MlpCache cache;
  for (size_t i = 0; i < inputs.size(); ++i) {
    const std::vector<double> q = mlp_forward(critic, inputs[i], grads ? &cache : nullptr);
    const double err = q[0] - targets[i];
    loss += err * err * inv_n;
    if (grads) mlp_backward(critic, cache, {2.0 * err * inv_n}, grads);
  }
  return loss;
}

double critic_value(const Mlp& critic, const std::vector<double>& obs,
                    const std::vector<double>& action) {
  return mlp_forward(critic, concat(obs, action))[0];
}

std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace rover
