#include "rover/sac.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "rover/serialize.hpp"

namespace rover {

namespace {

void check_finite_loss(double loss, const char* what) {
  if (!std::isfinite(loss)) throw NonFiniteLossError(what);
}

}  // namespace

SacAgent::SacAgent(const RlConfig& cfg, Rng& rng) : Agent(cfg) {
  const std::vector<size_t> policy_sizes = {cfg.obs_dim, cfg.hidden, cfg.hidden, 2 * cfg.act_dim};
  const std::vector<size_t> critic_sizes = {cfg.obs_dim + cfg.act_dim, cfg.hidden, cfg.hidden, 1};
  policy = make_mlp(policy_sizes, rng, 1e-2);
  q1 = make_mlp(critic_sizes, rng);
  q2 = make_mlp(critic_sizes, rng);
  q1_target = q1;
  q2_target = q2;
  log_alpha = std::log(cfg.init_alpha);
  AdamParams ap;
  ap.lr = cfg.lr;
  policy_opt = make_adam(policy, ap);
  q1_opt = make_adam(q1, ap);
  q2_opt = make_adam(q2, ap);
  alpha_opt.params = ap;
}

double SacAgent::alpha() const { return std::exp(log_alpha); }

std::vector<double> SacAgent::act(const std::vector<double>& obs, Rng& rng) {
  return sample_policy_action(policy, obs, rng).action;
}

std::vector<double> SacAgent::act_eval(const std::vector<double>& obs) const {
  return policy_mean_action(policy, obs);
}

std::vector<double> SacAgent::critic_targets(const std::vector<const Transition*>& batch,
                                             Rng& rng) const {
  const double a = alpha();
  std::vector<double> next_values(batch.size(), 0.0);
  for (size_t i = 0; i < batch.size(); ++i) {
    if (batch[i]->done) continue;
    const SampledAction next = sample_policy_action(policy, batch[i]->next_obs, rng);
    const double t1 = critic_value(q1_target, batch[i]->next_obs, next.action);
    const double t2 = critic_value(q2_target, batch[i]->next_obs, next.action);
    next_values[i] = std::min(t1, t2) - a * next.log_prob;
  }
  return bellman_targets(batch, next_values, cfg_.gamma);
}

double SacAgent::critic_update(const std::vector<const Transition*>& batch, Rng& rng) {
  const std::vector<double> y = critic_targets(batch, rng);
  std::vector<std::vector<double>> inputs(batch.size());
  for (size_t i = 0; i < batch.size(); ++i)
    inputs[i] = concat(batch[i]->obs, batch[i]->action);
  MlpGrads g1 = make_grads(q1);
  MlpGrads g2 = make_grads(q2);
  const double l1 = critic_mse_objective(q1, inputs, y, &g1);
  const double l2 = critic_mse_objective(q2, inputs, y, &g2);
  check_finite_loss(l1 + l2, "non-finite critic loss");
  adam_step(q1, g1, q1_opt);
  adam_step(q2, g2, q2_opt);
  return 0.5 * (l1 + l2);
}

double SacAgent::policy_update(const std::vector<const Transition*>& batch, Rng& rng) {
  std::vector<std::vector<double>> obs_batch(batch.size());
  std::vector<std::vector<double>> eps_batch(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    obs_batch[i] = batch[i]->obs;
    eps_batch[i].resize(cfg_.act_dim);
    for (double& e : eps_batch[i]) e = rng.normal();
  }
  MlpGrads grads = make_grads(policy);
  const double loss = sac_policy_objective(policy, q1, q2, alpha(), obs_batch, eps_batch, &grads);
  check_finite_loss(loss, "non-finite actor loss");
  adam_step(policy, grads, policy_opt);
  return loss;
}

double SacAgent::temperature_update(const std::vector<const Transition*>& batch, Rng& rng) {
  std::vector<double> log_probs(batch.size());
  for (size_t i = 0; i < batch.size(); ++i)
    log_probs[i] = sample_policy_action(policy, batch[i]->obs, rng).log_prob;
  double grad = 0.0;
  const double loss = alpha_objective(log_alpha, log_probs, cfg_.target_entropy, &grad);
  adam_scalar_step(log_alpha, grad, alpha_opt);
  return loss;
}

UpdateStats SacAgent::update(const ReplayPool& pool, Rng& rng) {
  const std::vector<const Transition*> batch = pool.sample(cfg_.batch_size, rng);
  UpdateStats stats;
  stats.critic_loss = critic_update(batch, rng);
  stats.actor_loss = policy_update(batch, rng);
  if (cfg_.auto_alpha) temperature_update(batch, rng);
  polyak_update(q1_target, q1, cfg_.tau);
  polyak_update(q2_target, q2, cfg_.tau);
  stats.ent_coef = alpha();
  return stats;
}

void SacAgent::save(std::ostream& out) const {
  write_mlp(out, policy);
  write_mlp(out, q1);
  write_mlp(out, q2);
  write_mlp(out, q1_target);
  write_mlp(out, q2_target);
  write_f64(out, log_alpha);
  write_adam(out, policy_opt);
  write_adam(out, q1_opt);
  write_adam(out, q2_opt);
  write_adam_scalar(out, alpha_opt);
}

void SacAgent::load(std::istream& in) {
  read_mlp_into(in, policy);
  read_mlp_into(in, q1);
  read_mlp_into(in, q2);
  read_mlp_into(in, q1_target);
  read_mlp_into(in, q2_target);
  log_alpha = read_f64(in);
  read_adam_into(in, policy_opt);
  read_adam_into(in, q1_opt);
  read_adam_into(in, q2_opt);
  read_adam_scalar_into(in, alpha_opt);
}

double soft_state_value(const Mlp& q1, const Mlp& q2, const Mlp& policy, double alpha,
                        const std::vector<double>& obs, Rng& rng) {
  const SampledAction sample = sample_policy_action(policy, obs, rng);
  const double v1 = critic_value(q1, obs, sample.action);
  const double v2 = critic_value(q2, obs, sample.action);
  return std::min(v1, v2) - alpha * sample.log_prob;
}

double sac_policy_objective(const Mlp& policy, const Mlp& q1, const Mlp& q2, double alpha,
                            const std::vector<std::vector<double>>& obs_batch,
                            const std::vector<std::vector<double>>& eps_batch, MlpGrads* grads) {
  if (obs_batch.size() != eps_batch.size() || obs_batch.empty())
    throw DimensionMismatchError("obs/eps batch size mismatch");
  const size_t act_dim = policy.output_size() / 2;
  const double inv_n = 1.0 / static_cast<double>(obs_batch.size());
  double loss = 0.0;
  MlpCache policy_cache, critic_cache;
  for (size_t i = 0; i < obs_batch.size(); ++i) {
    const std::vector<double> head =
        mlp_forward(policy, obs_batch[i], grads ? &policy_cache : nullptr);
    std::vector<double> action(act_dim), pre(act_dim), std_dev(act_dim);
    std::vector<bool> clamped(act_dim);
    double logp = 0.0;
    for (size_t j = 0; j < act_dim; ++j) {
      const double raw = head[act_dim + j];
      const double log_std = std::clamp(raw, kLogStdMin, kLogStdMax);
      clamped[j] = raw <= kLogStdMin || raw >= kLogStdMax;
      std_dev[j] = std::exp(log_std);
      pre[j] = head[j] + std_dev[j] * eps_batch[i][j];
      action[j] = std::tanh(pre[j]);
      logp += -0.5 * eps_batch[i][j] * eps_batch[i][j] - log_std - 0.9189385332046727 -
              log_one_minus_tanh_sq(pre[j]);
    }
    const std::vector<double> q_in = concat(obs_batch[i], action);
    const std::vector<double> v1 = mlp_forward(q1, q_in, grads ? &critic_cache : nullptr);
    const double v2_val = mlp_forward(q2, q_in)[0];
    const bool use_q1 = v1[0] <= v2_val;
    const double vmin = use_q1 ? v1[0] : v2_val;
    loss += (alpha * logp - vmin) * inv_n;
    if (!grads) continue;

    // d(min Q)/d action via the active critic's input gradient.
    std::vector<double> dq_dinput;
    if (use_q1) {
      dq_dinput = mlp_backward(q1, critic_cache, {1.0}, nullptr);
    } else {
      MlpCache c2;
      mlp_forward(q2, q_in, &c2);
      dq_dinput = mlp_backward(q2, c2, {1.0}, nullptr);
    }
    const size_t obs_dim = obs_batch[i].size();
    std::vector<double> d_head(2 * act_dim, 0.0);
    for (size_t j = 0; j < act_dim; ++j) {
      const double sech2 = 1.0 - action[j] * action[j];
      const double dq_da = dq_dinput[obs_dim + j];
      // d/d pre of (alpha * logp - minQ): the tanh correction contributes
      // 2*tanh(pre), the Gaussian part none (eps fixed), the critic
      // -dQ/da * sech^2.
      const double d_pre = alpha * 2.0 * action[j] - dq_da * sech2;
      d_head[j] = d_pre * inv_n;
      if (!clamped[j])
        d_head[act_dim + j] = (-alpha + d_pre * std_dev[j] * eps_batch[i][j]) * inv_n;
    }
    mlp_backward(policy, policy_cache, d_head, grads);
  }
  return loss;
}

double alpha_objective(double log_alpha, const std::vector<double>& log_probs,
                       double target_entropy, double* grad) {
  if (log_probs.empty()) throw DimensionMismatchError("empty log-prob batch");
  const double alpha = std::exp(log_alpha);
  double mean_term = 0.0;
  for (double lp : log_probs) mean_term += lp + target_entropy;
  mean_term /= static_cast<double>(log_probs.size());
  const double value = -alpha * mean_term;
  // Linear in alpha, so d/d log_alpha = alpha * d/d alpha = value.
  if (grad) *grad = value;
  return value;
}

}  // namespace rover
