#include "rover/td3.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "rover/ddpg.hpp"
#include "rover/serialize.hpp"

namespace rover {

Td3Agent::Td3Agent(const RlConfig& cfg, Rng& rng) : Agent(cfg) {
  const std::vector<size_t> policy_sizes = {cfg.obs_dim, cfg.hidden, cfg.hidden, cfg.act_dim};
  const std::vector<size_t> critic_sizes = {cfg.obs_dim + cfg.act_dim, cfg.hidden, cfg.hidden, 1};
  policy = make_mlp(policy_sizes, rng, 1e-2);
  q1 = make_mlp(critic_sizes, rng);
  q2 = make_mlp(critic_sizes, rng);
  policy_target = policy;
  q1_target = q1;
  q2_target = q2;
  AdamParams ap;
  ap.lr = cfg.lr;
  policy_opt = make_adam(policy, ap);
  q1_opt = make_adam(q1, ap);
  q2_opt = make_adam(q2, ap);
}

std::vector<double> Td3Agent::act(const std::vector<double>& obs, Rng& rng) {
  std::vector<double> a = deterministic_action(policy, obs);
  for (double& x : a) x = std::clamp(x + cfg_.explore_noise * rng.normal(), -1.0, 1.0);
  return a;
}

std::vector<double> Td3Agent::act_eval(const std::vector<double>& obs) const {
  return deterministic_action(policy, obs);
}

std::vector<double> Td3Agent::smoothed_target_action(const std::vector<double>& next_obs,
                                                     Rng& rng) const {
  std::vector<double> a = deterministic_action(policy_target, next_obs);
  for (double& x : a) {
    const double noise =
        std::clamp(cfg_.policy_noise * rng.normal(), -cfg_.noise_clip, cfg_.noise_clip);
    x = std::clamp(x + noise, -1.0, 1.0);
  }
  return a;
}

std::vector<double> Td3Agent::critic_targets(const std::vector<const Transition*>& batch,
                                             Rng& rng) const {
  std::vector<double> next_values(batch.size(), 0.0);
  for (size_t i = 0; i < batch.size(); ++i) {
    if (batch[i]->done) continue;
    const std::vector<double> next_a = smoothed_target_action(batch[i]->next_obs, rng);
    const double t1 = critic_value(q1_target, batch[i]->next_obs, next_a);
    const double t2 = critic_value(q2_target, batch[i]->next_obs, next_a);
    next_values[i] = std::min(t1, t2);
  }
  return bellman_targets(batch, next_values, cfg_.gamma);
}

double Td3Agent::critic_update(const std::vector<const Transition*>& batch, Rng& rng) {
  const std::vector<double> y = critic_targets(batch, rng);
  std::vector<std::vector<double>> inputs(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) inputs[i] = concat(batch[i]->obs, batch[i]->action);
  MlpGrads g1 = make_grads(q1);
  MlpGrads g2 = make_grads(q2);
  const double l1 = critic_mse_objective(q1, inputs, y, &g1);
  const double l2 = critic_mse_objective(q2, inputs, y, &g2);
  if (!std::isfinite(l1 + l2)) throw NonFiniteLossError("non-finite critic loss");
  adam_step(q1, g1, q1_opt);
  adam_step(q2, g2, q2_opt);
  return 0.5 * (l1 + l2);
}

double Td3Agent::policy_update(const std::vector<const Transition*>& batch) {
  std::vector<std::vector<double>> obs_batch(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) obs_batch[i] = batch[i]->obs;
  MlpGrads grads = make_grads(policy);
  const double loss = deterministic_policy_objective(policy, q1, obs_batch, &grads);
  if (!std::isfinite(loss)) throw NonFiniteLossError("non-finite actor loss");
  adam_step(policy, grads, policy_opt);
  return loss;
}

UpdateStats Td3Agent::update(const ReplayPool& pool, Rng& rng) {
  const std::vector<const Transition*> batch = pool.sample(cfg_.batch_size, rng);
  UpdateStats stats;
  stats.critic_loss = critic_update(batch, rng);
  ++update_count;
  if (update_count % cfg_.policy_delay == 0) {
    last_actor_loss_ = policy_update(batch);
    polyak_update(q1_target, q1, cfg_.tau);
    polyak_update(q2_target, q2, cfg_.tau);
    polyak_update(policy_target, policy, cfg_.tau);
  }
  stats.actor_loss = last_actor_loss_;
  return stats;
}

void Td3Agent::save(std::ostream& out) const {
  write_mlp(out, policy);
  write_mlp(out, policy_target);
  write_mlp(out, q1);
  write_mlp(out, q2);
  write_mlp(out, q1_target);
  write_mlp(out, q2_target);
  write_adam(out, policy_opt);
  write_adam(out, q1_opt);
  write_adam(out, q2_opt);
  write_u64(out, update_count);
  write_f64(out, last_actor_loss_);
}

void Td3Agent::load(std::istream& in) {
  read_mlp_into(in, policy);
  read_mlp_into(in, policy_target);
  read_mlp_into(in, q1);
  read_mlp_into(in, q2);
  read_mlp_into(in, q1_target);
  read_mlp_into(in, q2_target);
  read_adam_into(in, policy_opt);
  read_adam_into(in, q1_opt);
  read_adam_into(in, q2_opt);
  update_count = read_u64(in);
  last_actor_loss_ = read_f64(in);
}

}  // namespace rover
