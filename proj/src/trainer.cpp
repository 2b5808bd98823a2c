#include "rover/trainer.hpp"

#include <cmath>
#include <stdexcept>

namespace rover {

namespace {

std::vector<double> to_vec(const std::array<double, 4>& a) {
  return std::vector<double>(a.begin(), a.end());
}

void window_means(const RunMetrics& m, size_t window, double* rew, double* len) {
  const size_t n = m.episode_returns.size();
  if (n == 0) {
    *rew = 0.0;
    *len = 0.0;
    return;
  }
  const size_t count = std::min(window, n);
  double rsum = 0.0, lsum = 0.0;
  for (size_t i = n - count; i < n; ++i) {
    rsum += m.episode_returns[i];
    lsum += static_cast<double>(m.episode_lengths[i]);
  }
  *rew = rsum / static_cast<double>(count);
  *len = lsum / static_cast<double>(count);
}

}  // namespace

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunMetrics train_agent(Agent& agent, Environment& env, TrainOptions options) {
  if (options.total_steps == 0) throw std::invalid_argument("total_steps must be positive");
  if (options.log_period == 0) throw std::invalid_argument("log_period must be positive");
  const RlConfig& cfg = agent.config();
  constexpr size_t kEpisodeWindow = 20;

  ReplayPool pool(cfg.replay_capacity);
  Rng rng(mix_seed(options.seed, 0));
  RunMetrics metrics;
  UpdateStats last;
  if (agent.algo() == "sac") last.ent_coef = cfg.init_alpha;

  size_t episode_index = 0;
  std::vector<double> obs = to_vec(env.reset(mix_seed(options.seed, 1 + episode_index)).to_array());
  double ep_return = 0.0;
  size_t ep_len = 0;

  for (size_t step = 1; step <= options.total_steps; ++step) {
    std::vector<double> action(4);
    if (step <= cfg.warmup_steps) {
      for (double& a : action) a = rng.uniform(-1.0, 1.0);
    } else {
      action = agent.act(obs, rng);
    }
    Action env_action;
    for (size_t i = 0; i < 4; ++i) env_action.a[i] = action[i];
    const EnvStepResult res = env.step(env_action);
    const std::vector<double> next_obs = to_vec(res.obs.to_array());
    pool.add(Transition{obs, action, res.reward, next_obs, res.done});
    ep_return += res.reward;
    ++ep_len;
    if (res.done) {
      metrics.episode_returns.push_back(ep_return);
      metrics.episode_lengths.push_back(ep_len);
      metrics.episode_crossed.push_back(res.info.crossed);
      ++episode_index;
      obs = to_vec(env.reset(mix_seed(options.seed, 1 + episode_index)).to_array());
      ep_return = 0.0;
      ep_len = 0;
    } else {
      obs = next_obs;
    }
    if (step > cfg.warmup_steps) last = agent.update(pool, rng);

    if (step % options.log_period == 0 || step == options.total_steps) {
      MetricsRow row;
      row.step = step;
      window_means(metrics, kEpisodeWindow, &row.ep_rew_mean, &row.ep_len_mean);
      row.actor_loss = last.actor_loss;
      row.critic_loss = last.critic_loss;
      row.ent_coef = last.ent_coef;
      metrics.rows.push_back(row);
      if (options.on_log) options.on_log(row);
    }
  }
  return metrics;
}

}  // namespace rover
