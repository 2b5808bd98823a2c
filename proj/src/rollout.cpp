#include "rover/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "rover/trainer.hpp"

namespace rover {

namespace {

constexpr double kDegPerRad = 180.0 / 3.14159265358979323846;

RunConfig pinned_height(const RunConfig& config) {
  RunConfig pinned = config;
  pinned.episode.height_min = config.height;
  pinned.episode.height_max = config.height;
  return pinned;
}

std::vector<double> to_vec(const std::array<double, 4>& a) {
  return std::vector<double>(a.begin(), a.end());
}

// One half of a comparison run: fixed-horizon, termination-free rollout with
// either the trained policy on the PID joints or the passive springs.
struct ModeTrace {
  std::vector<double> time, pitch_deg, velocity;
  double peak_pitch_deg = 0.0;
  bool crossed = false;
  double mean_vel_crossing = 0.0;
  bool rebound = false;
};

ModeTrace run_mode(Agent* agent, const RunConfig& config, SuspensionMode mode, double height,
                   double face_jitter, double horizon_s, int sample_every) {
  const ResetOutcome start = reset_rollout(config.mechanism, config.physics, config.episode,
                                           mode, config.pid, height, face_jitter);
  RoverState state = start.state;
  PidState pid_front, pid_rear;
  double front_target = 0.0, rear_target = 0.0;
  const int substeps =
      static_cast<int>(std::round(config.episode.control_interval / config.physics.dt));
  const int total_steps = static_cast<int>(std::round(horizon_s / config.physics.dt));

  ModeTrace out;
  bool engaged = false;
  double vel_sum = 0.0;
  int vel_count = 0;
  for (int i = 0; i < total_steps; ++i) {
    if (mode == SuspensionMode::active && i % substeps == 0) {
      const Observation obs = build_observation(state, start.terrain, config.mechanism, height);
      const std::vector<double> action = agent->act_eval(to_vec(obs.to_array()));
      Action a;
      for (size_t k = 0; k < 4; ++k) a.a[k] = action[k];
      std::tie(front_target, rear_target) = scale_action(a);
    }
    std::pair<double, double> tau{0.0, 0.0};
    if (mode == SuspensionMode::active) {
      tau.first = pid_step(config.pid, pid_front, front_target, state.q4, config.physics.dt);
      tau.second = pid_step(config.pid, pid_rear, rear_target, state.q3, config.physics.dt);
    }
    state = step_dynamics(state, mode, tau, start.terrain, config.physics, config.mechanism);

    out.peak_pitch_deg = std::max(out.peak_pitch_deg, std::abs(state.pitch) * kDegPerRad);
    if (state.vx < 0.0) out.rebound = true;
    const bool past =
        crossing_complete(state, start.terrain, config.mechanism, config.episode.crossing_margin);
    if (!engaged && distance_to_obstacle(state, start.terrain, config.mechanism) <= 0.0)
      engaged = true;
    if (engaged && !out.crossed) {
      vel_sum += state.vx;
      ++vel_count;
    }
    if (past) out.crossed = true;

    if ((i + 1) % sample_every == 0) {
      out.time.push_back(state.sim_time);
      out.pitch_deg.push_back(state.pitch * kDegPerRad);
      out.velocity.push_back(state.vx);
    }
  }
  out.mean_vel_crossing = vel_count > 0 ? vel_sum / vel_count : 0.0;
  return out;
}

}  // namespace

EvalEpisode run_eval_episode(Agent& agent, const RunConfig& config, uint64_t seed) {
  const RunConfig cfg = pinned_height(config);
  Environment env(cfg.mechanism, cfg.physics, cfg.episode, cfg.pid, SuspensionMode::active);
  EvalEpisode out;
  Observation obs = env.reset(seed);
  double vel_sum = 0.0;
  size_t vel_count = 0;
  while (true) {
    const std::vector<double> action = agent.act_eval(to_vec(obs.to_array()));
    Action a;
    for (size_t k = 0; k < 4; ++k) a.a[k] = action[k];
    const EnvStepResult res = env.step(a);
    ++out.steps;
    out.episode_return += res.reward;
    for (double p : res.info.pitch_trace)
      out.peak_pitch_deg = std::max(out.peak_pitch_deg, std::abs(p) * kDegPerRad);
    for (double v : res.info.velocity_trace) {
      vel_sum += v;
      ++vel_count;
    }
    out.trace.push_back({res.info.sim_time, res.obs.pitch_deg, env.state().vx, env.state().q3,
                         env.state().q4, res.reward});
    obs = res.obs;
    if (res.done) {
      out.success = res.info.crossed;
      break;
    }
  }
  out.mean_velocity = vel_count > 0 ? vel_sum / static_cast<double>(vel_count) : 0.0;
  return out;
}

EvalSummary run_evaluation(Agent& agent, const RunConfig& config) {
  EvalSummary summary;
  double vel_sum = 0.0;
  for (uint64_t i = 0; i < config.episodes; ++i) {
    EvalEpisode ep = run_eval_episode(agent, config, mix_seed(config.seed, 1000 + i));
    summary.success_rate += ep.success ? 1.0 : 0.0;
    summary.peak_pitch_deg = std::max(summary.peak_pitch_deg, ep.peak_pitch_deg);
    vel_sum += ep.mean_velocity;
    summary.episodes.push_back(std::move(ep));
  }
  const double n = static_cast<double>(config.episodes);
  summary.success_rate /= n;
  summary.mean_velocity = vel_sum / n;
  return summary;
}

CompareTrace run_comparison(Agent& agent, const RunConfig& config, uint64_t seed) {
  Rng rng(mix_seed(seed, 3));
  const double face_jitter = rng.uniform(0.0, 0.5);
  constexpr double kHorizonS = 15.0;
  constexpr int kSampleEvery = 10;  // one row per 10 ms

  const ModeTrace active = run_mode(&agent, config, SuspensionMode::active, config.height,
                                    face_jitter, kHorizonS, kSampleEvery);
  const ModeTrace passive = run_mode(nullptr, config, SuspensionMode::passive, config.height,
                                     face_jitter, kHorizonS, kSampleEvery);

  CompareTrace out;
  out.time = active.time;
  out.pitch_active = active.pitch_deg;
  out.vel_active = active.velocity;
  out.pitch_passive = passive.pitch_deg;
  out.vel_passive = passive.velocity;
  out.peak_pitch_active_deg = active.peak_pitch_deg;
  out.peak_pitch_passive_deg = passive.peak_pitch_deg;
  out.passive_rebound = passive.rebound;
  out.mean_vel_active = active.mean_vel_crossing;
  out.active_crossed = active.crossed;
  out.passive_crossed = passive.crossed;
  return out;
}

}  // namespace rover
