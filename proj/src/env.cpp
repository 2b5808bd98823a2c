#include "rover/env.hpp"

#include <algorithm>
#include <cmath>

namespace rover {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kActionScaleRad = 37.0 / kDegPerRad;
constexpr double kObsClip = 50.0;

double clip_obs(double v) { return std::clamp(v, -kObsClip, kObsClip); }

double clip_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

void EpisodeConfig::validate() const {
  if (!(height_min > 0.0) || height_min > height_max)
    throw std::invalid_argument("obstacle height range is empty or non-positive");
  if (threshold_distance <= 0.0)
    throw std::invalid_argument("threshold distance must be positive");
  if (control_interval <= 0.0)
    throw std::invalid_argument("control interval must be positive");
  if (crossing_margin < 0.0)
    throw std::invalid_argument("crossing margin must be non-negative");
  if (disturbance_amplitude < 0.0)
    throw std::invalid_argument("disturbance amplitude must be non-negative");
  // The termination contract is shared verbatim with compute_reward.
  if (max_agent_steps != 430 || pitch_fail_deg != 20.0 || yaw_fail_deg != 10.0)
    throw std::invalid_argument("termination thresholds are fixed by the task");
}

std::pair<double, double> scale_action(const Action& action) {
  const double a0 = clip_unit(action.a[0]);
  const double a1 = clip_unit(action.a[1]);
  const double a2 = clip_unit(action.a[2]);
  const double a3 = clip_unit(action.a[3]);
  const double front = 0.5 * (a2 + a3) * kActionScaleRad;
  const double rear = 0.5 * (a0 + a1) * kActionScaleRad;
  return {front, rear};
}

RewardResult compute_reward(double pitch_deg, double yaw_deg, bool crossed, int steps) {
  if (pitch_deg > 20.0) return {-100.0, true};
  if (yaw_deg > 10.0) return {-100.0, true};
  if (crossed) return {100.0, true};
  if (steps > 430) return {-50.0, true};
  return {0.0, false};
}

ResetOutcome reset_rollout(const MechanismConfig& config, const BodyParams& params,
                           const EpisodeConfig& episode, SuspensionMode mode,
                           const PidGains& gains, double height, double face_jitter) {
  // Start pose: control links at rest angles, lowest wheel touching z = 0.
  RoverState state;
  state.chassis_x = 1.0;
  state.q3 = std::clamp(0.0, -config.joint_limit, config.joint_limit);
  state.q4 = state.q3;
  const MechanismPose mp = solve_loop_closure(config, state.q3, state.q4);
  const double low =
      std::min({mp.wheel_front.z, mp.wheel_mid.z, mp.wheel_rear.z});
  state.chassis_z = config.wheel_radius - low;

  PidState pid_front, pid_rear;
  BodyParams still = params;
  still.drive_speed = 0.0;

  // Settle on flat ground far from the step.
  TerrainProfile flat{35.0, height, 40.0};
  const int settle_steps = static_cast<int>(std::round(2.0 / params.dt));
  const int min_settle = static_cast<int>(std::round(0.2 / params.dt));
  for (int i = 0; i < settle_steps; ++i) {
    std::pair<double, double> tau{0.0, 0.0};
    if (mode == SuspensionMode::active) {
      tau.first = pid_step(gains, pid_front, 0.0, state.q4, params.dt);
      tau.second = pid_step(gains, pid_rear, 0.0, state.q3, params.dt);
    }
    state = step_dynamics(state, mode, tau, flat, still, config);
    if (i >= min_settle && std::abs(state.vx) < 1e-3 && std::abs(state.vz) < 1e-3)
      break;
  }

  // Place the face ahead of the settled rover, then drive up to the
  // threshold distance.  The run-up leaves room to reach cruise, and the
  // commanded speed ramps in over a second: engaging the slip servo at full
  // speed from rest winds the suspension up like a series spring and the
  // squat takes seconds to creep back out.
  ResetOutcome out;
  out.height = height;
  out.terrain.step_height = height;
  out.terrain.extent = 40.0;
  {
    const TerrainProfile probe{35.0, height, 40.0};
    const double gap = distance_to_obstacle(state, probe, config);
    out.terrain.step_x = 35.0 - gap + 3.0 + face_jitter;
  }

  BodyParams run = params;
  const int drive_cap = static_cast<int>(std::round(30.0 / params.dt));
  for (int i = 0; i < drive_cap; ++i) {
    if (distance_to_obstacle(state, out.terrain, config) <= episode.threshold_distance)
      break;
    run.drive_speed = params.drive_speed * std::min(1.0, i * params.dt);
    std::pair<double, double> tau{0.0, 0.0};
    if (mode == SuspensionMode::active) {
      tau.first = pid_step(gains, pid_front, 0.0, state.q4, params.dt);
      tau.second = pid_step(gains, pid_rear, 0.0, state.q3, params.dt);
    }
    state = step_dynamics(state, mode, tau, out.terrain, run, config);
  }

  state.sim_time = 0.0;
  out.state = state;
  return out;
}

Environment::Environment(MechanismConfig config, BodyParams params,
                         EpisodeConfig episode, PidGains gains, SuspensionMode mode)
    : config_(config), params_(params), episode_(episode), gains_(gains), mode_(mode) {
  config_.validate();
  params_.validate();
  episode_.validate();
  gains_.validate();
  const double sub = episode_.control_interval / params_.dt;
  if (std::abs(sub - std::round(sub)) > 1e-9)
    throw std::invalid_argument("control interval must be a multiple of dt");
}

Observation Environment::reset(uint64_t seed) {
  rng_ = Rng(seed);
  height_ = rng_.uniform(episode_.height_min, episode_.height_max);
  const double jitter = rng_.uniform(0.0, 0.5);
  const ResetOutcome out =
      reset_rollout(config_, params_, episode_, mode_, gains_, height_, jitter);
  state_ = out.state;
  terrain_ = out.terrain;
  pid_front_ = PidState{};
  pid_rear_ = PidState{};
  steps_ = 0;
  active_ = true;
  state_.roll = 0.0;
  state_.yaw = 0.0;
  return observation();
}

Observation build_observation(const RoverState& state, const TerrainProfile& terrain,
                              const MechanismConfig& config, double height) {
  Observation obs;
  obs.pitch_deg = clip_obs(state.pitch * kDegPerRad);
  obs.roll_deg = clip_obs(state.roll * kDegPerRad);
  obs.distance_m = clip_obs(distance_to_obstacle(state, terrain, config));
  obs.height_m = clip_obs(height);
  return obs;
}

bool crossing_complete(const RoverState& state, const TerrainProfile& terrain,
                       const MechanismConfig& config, double margin) {
  const std::array<Vec2, 3> wheels = wheel_world_positions(state, config);
  double trailing = wheels[0].x;
  for (const Vec2& w : wheels) trailing = std::min(trailing, w.x);
  trailing -= config.wheel_radius;
  if (trailing <= terrain.step_x + margin) return false;

  // Support must rest entirely on the upper level; wheels that never touch
  // the ground (the raised outer wheel of the stance) do not block success.
  int grounded = 0;
  for (const Vec2& w : wheels) {
    const SurfacePoint sp = nearest_surface(terrain, w);
    const bool touch = sp.distance <= config.wheel_radius + 1e-6;
    if (!touch) continue;
    if (sp.feature != TerrainFeature::upper_floor) return false;
    ++grounded;
  }
  return grounded >= 2;
}

Observation Environment::observation() const {
  return build_observation(state_, terrain_, config_, height_);
}

bool Environment::crossed() const {
  return crossing_complete(state_, terrain_, config_, episode_.crossing_margin);
}

EnvStepResult Environment::step(const Action& action) {
  if (!active_) throw EpisodeFinishedError("episode already terminated");

  const auto [front_target, rear_target] = scale_action(action);
  const int substeps =
      static_cast<int>(std::round(episode_.control_interval / params_.dt));

  EnvStepResult result;
  result.info.pitch_trace.reserve(substeps);
  result.info.velocity_trace.reserve(substeps);

  for (int i = 0; i < substeps; ++i) {
    std::pair<double, double> tau{0.0, 0.0};
    if (mode_ == SuspensionMode::active) {
      tau.first = pid_step(gains_, pid_front_, front_target, state_.q4, params_.dt);
      tau.second = pid_step(gains_, pid_rear_, rear_target, state_.q3, params_.dt);
    }
    state_ = step_dynamics(state_, mode_, tau, terrain_, params_, config_);
    result.info.pitch_trace.push_back(state_.pitch);
    result.info.velocity_trace.push_back(state_.vx);
  }

  if (episode_.disturbance_enabled && episode_.disturbance_amplitude > 0.0) {
    const double amp = episode_.disturbance_amplitude / kDegPerRad;
    state_.roll = amp * rng_.uniform(-1.0, 1.0);
    state_.yaw = amp * rng_.uniform(-1.0, 1.0);
  }

  ++steps_;
  const bool did_cross = crossed();
  const RewardResult rr = compute_reward(state_.pitch * kDegPerRad,
                                         state_.yaw * kDegPerRad, did_cross, steps_);
  result.reward = rr.reward;
  result.done = rr.done;
  result.info.crossed = did_cross;
  result.info.sim_time = state_.sim_time;
  result.obs = observation();
  if (rr.done) active_ = false;
  return result;
}

}  // namespace rover
