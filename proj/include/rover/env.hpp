#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rover/mechanism.hpp"
#include "rover/physics.hpp"
#include "rover/pid.hpp"
#include "rover/rng.hpp"
#include "rover/terrain.hpp"

namespace rover {

struct EpisodeFinishedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Agent-facing observation; angles in degrees, lengths in metres, every
// component clipped to [-50, 50].
struct Observation {
  double pitch_deg = 0.0;
  double roll_deg = 0.0;
  double distance_m = 0.0;
  double height_m = 0.0;

  std::array<double, 4> to_array() const {
    return {pitch_deg, roll_deg, distance_m, height_m};
  }
};

// Four commands in [-1, 1]: (a0, a1) average to the rear control-link target,
// (a2, a3) to the front control-link target, each scaled by the 37-degree
// actuation limit.
struct Action {
  std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};
};

std::pair<double, double> scale_action(const Action& action);  // (front, rear) rad

struct EpisodeConfig {
  double height_min = 0.25;
  double height_max = 0.32;
  double threshold_distance = 1.0;   // m, hands control to the agent
  double control_interval = 0.05;    // s between agent decisions
  double crossing_margin = 0.05;     // m past the face for success
  bool disturbance_enabled = false;  // feeds the roll/yaw channels
  double disturbance_amplitude = 0.0;  // deg, zero-mean bounded noise

  // Fixed termination contract shared with compute_reward.
  int max_agent_steps = 430;
  double pitch_fail_deg = 20.0;
  double yaw_fail_deg = 10.0;

  void validate() const;
};

struct RewardResult {
  double reward = 0.0;
  bool done = false;
};

// Terminal-only reward: -100 on pitch or yaw failure, +100 on crossing,
// -50 on timeout, 0 otherwise, evaluated in that order.
RewardResult compute_reward(double pitch_deg, double yaw_deg, bool crossed, int steps);

struct StepInfo {
  double sim_time = 0.0;
  bool crossed = false;
  std::vector<double> pitch_trace;     // rad, one sample per physics step
  std::vector<double> velocity_trace;  // m/s chassis forward speed
};

struct EnvStepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// Observation as the agent sees it, from raw simulation state.
Observation build_observation(const RoverState& state, const TerrainProfile& terrain,
                              const MechanismConfig& config, double height);

// Success predicate: the rearmost wheel trailing edge is `margin` past the
// face and every load-bearing wheel rests on the upper level (at least two).
bool crossing_complete(const RoverState& state, const TerrainProfile& terrain,
                       const MechanismConfig& config, double margin);

// Builds the start state used by both the environment and the comparison
// traces: place the rover on flat ground, settle it, then drive forward at
// the commanded speed until the obstacle is threshold_distance away.
struct ResetOutcome {
  RoverState state;
  TerrainProfile terrain;
  double height = 0.0;
};
ResetOutcome reset_rollout(const MechanismConfig& config, const BodyParams& params,
                           const EpisodeConfig& episode, SuspensionMode mode,
                           const PidGains& gains, double height, double face_jitter);

// Step-obstacle crossing task.  Each agent step spans control_interval of
// simulated time at the physics rate; in active mode the four-component
// action sets PID position targets on the control links, in passive mode the
// torsion springs act and the action is ignored.
class Environment {
 public:
  Environment(MechanismConfig config, BodyParams params, EpisodeConfig episode,
              PidGains gains, SuspensionMode mode);

  Observation reset(uint64_t seed);
  EnvStepResult step(const Action& action);

  const RoverState& state() const { return state_; }
  const TerrainProfile& terrain() const { return terrain_; }
  const MechanismConfig& mechanism() const { return config_; }
  const BodyParams& body() const { return params_; }
  SuspensionMode mode() const { return mode_; }
  double obstacle_height() const { return height_; }
  int steps_taken() const { return steps_; }
  bool episode_active() const { return active_; }

  Observation observation() const;
  bool crossed() const;

  // Test fixture hook: overrides the rover state mid-episode.
  void set_state(const RoverState& state) { state_ = state; }

 private:
  MechanismConfig config_;
  BodyParams params_;
  EpisodeConfig episode_;
  PidGains gains_;
  SuspensionMode mode_;

  TerrainProfile terrain_;
  RoverState state_;
  Rng rng_{0};
  PidState pid_front_;
  PidState pid_rear_;
  double height_ = 0.0;
  int steps_ = 0;
  bool active_ = false;
};

}  // namespace rover
