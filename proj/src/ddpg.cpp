#include "rover/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "rover/serialize.hpp"

namespace rover {

DdpgAgent::DdpgAgent(const RlConfig& cfg, Rng& rng) : Agent(cfg) {
  const std::vector<size_t> policy_sizes = {cfg.obs_dim, cfg.hidden, cfg.hidden, cfg.act_dim};
  const std::vector<size_t> critic_sizes = {cfg.obs_dim + cfg.act_dim, cfg.hidden, cfg.hidden, 1};
  policy = make_mlp(policy_sizes, rng, 1e-2);
  q1 = make_mlp(critic_sizes, rng);
  policy_target = policy;
  q1_target = q1;
  AdamParams ap;
  ap.lr = cfg.lr;
  policy_opt = make_adam(policy, ap);
  q1_opt = make_adam(q1, ap);
}

std::vector<double> DdpgAgent::act(const std::vector<double>& obs, Rng& rng) {
  std::vector<double> a = deterministic_action(policy, obs);
  for (double& x : a) x = std::clamp(x + cfg_.explore_noise * rng.normal(), -1.0, 1.0);
  return a;
}

std::vector<double> DdpgAgent::act_eval(const std::vector<double>& obs) const {
  return deterministic_action(policy, obs);
}

std::vector<double> DdpgAgent::critic_targets(
    const std::vector<const Transition*>& batch) const {
  std::vector<double> next_values(batch.size(), 0.0);
  for (size_t i = 0; i < batch.size(); ++i) {
    if (batch[i]->done) continue;
    const std::vector<double> next_a = deterministic_action(policy_target, batch[i]->next_obs);
    next_values[i] = critic_value(q1_target, batch[i]->next_obs, next_a);
  }
  return bellman_targets(batch, next_values, cfg_.gamma);
}

double DdpgAgent::critic_update(const std::vector<const Transition*>& batch) {
  const std::vector<double> y = critic_targets(batch);
  std::vector<std::vector<double>> inputs(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) inputs[i] = concat(batch[i]->obs, batch[i]->action);
  MlpGrads grads = make_grads(q1);
  const double loss = critic_mse_objective(q1, inputs, y, &grads);
  if (!std::isfinite(loss)) throw NonFiniteLossError("non-finite critic loss");
  adam_step(q1, grads, q1_opt);
  return loss;
}

double DdpgAgent::policy_update(const std::vector<const Transition*>& batch) {
  std::vector<std::vector<double>> obs_batch(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) obs_batch[i] = batch[i]->obs;
  MlpGrads grads = make_grads(policy);
  const double loss = deterministic_policy_objective(policy, q1, obs_batch, &grads);
  if (!std::isfinite(loss)) throw NonFiniteLossError("non-finite actor loss");
  adam_step(policy, grads, policy_opt);
  return loss;
}

UpdateStats DdpgAgent::update(const ReplayPool& pool, Rng& rng) {
  const std::vector<const Transition*> batch = pool.sample(cfg_.batch_size, rng);
  UpdateStats stats;
  stats.critic_loss = critic_update(batch);
  stats.actor_loss = policy_update(batch);
  polyak_update(q1_target, q1, cfg_.tau);
  polyak_update(policy_target, policy, cfg_.tau);
  return stats;
}

void DdpgAgent::save(std::ostream& out) const {
  write_mlp(out, policy);
  write_mlp(out, policy_target);
  write_mlp(out, q1);
  write_mlp(out, q1_target);
  write_adam(out, policy_opt);
  write_adam(out, q1_opt);
}

void DdpgAgent::load(std::istream& in) {
  read_mlp_into(in, policy);
  read_mlp_into(in, policy_target);
  read_mlp_into(in, q1);
  read_mlp_into(in, q1_target);
  read_adam_into(in, policy_opt);
  read_adam_into(in, q1_opt);
}

std::vector<double> deterministic_action(const Mlp& policy, const std::vector<double>& obs) {
  std::vector<double> a = mlp_forward(policy, obs);
  for (double& x : a) x = std::tanh(x);
  return a;
}

double deterministic_policy_objective(const Mlp& policy, const Mlp& critic,
                                      const std::vector<std::vector<double>>& obs_batch,
                                      MlpGrads* grads) {
  if (obs_batch.empty()) throw DimensionMismatchError("empty batch");
  const double inv_n = 1.0 / static_cast<double>(obs_batch.size());
  double loss = 0.0;
  MlpCache policy_cache, critic_cache;
  for (const std::vector<double>& obs : obs_batch) {
    const std::vector<double> raw = mlp_forward(policy, obs, grads ? &policy_cache : nullptr);
    std::vector<double> action(raw.size());
    for (size_t j = 0; j < raw.size(); ++j) action[j] = std::tanh(raw[j]);
    const std::vector<double> q_in = concat(obs, action);
    const std::vector<double> q = mlp_forward(critic, q_in, grads ? &critic_cache : nullptr);
    loss -= q[0] * inv_n;
    if (!grads) continue;
    const std::vector<double> dq_dinput = mlp_backward(critic, critic_cache, {1.0}, nullptr);
    std::vector<double> d_raw(raw.size());
    for (size_t j = 0; j < raw.size(); ++j) {
      const double sech2 = 1.0 - action[j] * action[j];
      d_raw[j] = -dq_dinput[obs.size() + j] * sech2 * inv_n;
    }
    mlp_backward(policy, policy_cache, d_raw, grads);
  }
  return loss;
}

}  // namespace rover
