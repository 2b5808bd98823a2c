#pragma once

#include <array>
#include <stdexcept>
#include <utility>

#include "rover/mechanism.hpp"
#include "rover/terrain.hpp"
#include "rover/vec2.hpp"

namespace rover {

struct NumericalBlowupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inertial and contact parameters of the planar rover.  Masses are lumped at
// the chassis centre of mass, the link centres and the wheel centres; the
// chassis additionally carries a rotational inertia and each control joint a
// small rotor inertia.
struct BodyParams {
  double chassis_mass = 14.0;
  double chassis_inertia = 0.9;     // kg*m^2 about the centre of mass
  double chassis_com_x = -0.16;     // centre of mass in the body frame; the
  double chassis_com_z = 0.0;       // battery pack sits behind the pivots
  double control_link_mass = 0.4;   // each of the two control links
  double bogie_mass = 0.8;          // each wheel-carrying bogie link
  double wheel_mass = 1.2;          // each of the three wheels
  double joint_rotor_inertia = 0.01;  // kg*m^2 reflected at each control joint
  double joint_damping = 0.5;         // N*m*s/rad viscous, both modes

  double contact_stiffness = 5.0e4;  // N/m
  double contact_damping = 1.0e3;    // N*s/m
  double friction_coeff = 1.1;
  double slip_ref = 0.05;    // m/s, friction saturation scale
  double drive_speed = 0.7;  // m/s commanded wheel surface speed

  // Structural stop short of the bogie-pair straightening singularity.
  double ext_stop_margin = 0.02;      // m of |C-D| slack kept in reserve
  double ext_stop_stiffness = 5.0e4;  // N/m on the |C-D| overshoot
  double ext_stop_damping = 1.0e3;    // N*s/m

  double gravity = 9.81;
  double dt = 1.0e-3;  // s

  void validate() const;
};

enum class SuspensionMode { active, passive };

// Full simulation state.  Roll and yaw are kinematic channels fed by the
// optional disturbance injector; the rigid-body dynamics is planar.
struct RoverState {
  double chassis_x = 0.0;
  double chassis_z = 0.0;
  double pitch = 0.0;  // rad, nose-up positive
  double vx = 0.0;
  double vz = 0.0;
  double pitch_rate = 0.0;
  double q3 = 0.0;  // rear control-link angle
  double q4 = 0.0;  // front control-link angle
  double q3_rate = 0.0;
  double q4_rate = 0.0;
  double roll = 0.0;  // rad, kinematic channel
  double yaw = 0.0;   // rad, kinematic channel
  std::array<bool, 3> wheel_contact{false, false, false};  // front, mid, rear
  double sim_time = 0.0;

  Pose2 chassis_pose() const { return {{chassis_x, chassis_z}, pitch}; }
};

struct ContactResult {
  Vec2 force{};          // on the wheel centre, world frame
  bool touching = false;
  TerrainFeature feature = TerrainFeature::lower_floor;
  double penetration = 0.0;  // m, positive when touching
};

// Penalty contact for one wheel: a one-sided damped spring along the surface
// normal plus saturated viscous friction along the surface tangent.  The
// drive enters as the commanded wheel surface speed inside the slip velocity,
// so traction is friction-limited by construction.
ContactResult contact_force(const Vec2& wheel_center, double wheel_radius,
                            const TerrainProfile& profile, const Vec2& wheel_velocity,
                            const BodyParams& params);

// One semi-implicit Euler step of the articulated rover.  joint_torques is
// (front, rear) and is applied only in active mode; passive mode applies the
// configured torsion springs instead.  Viscous joint damping and the
// structural extension stop act in both modes.  Joint angles are clamped to
// +/- joint_limit with velocity zeroing at the stop.
RoverState step_dynamics(const RoverState& state, SuspensionMode mode,
                         std::pair<double, double> joint_torques,
                         const TerrainProfile& profile, const BodyParams& params,
                         const MechanismConfig& config);

// Signed gap between the step face and the foremost wheel's leading edge.
double distance_to_obstacle(const RoverState& state, const TerrainProfile& profile,
                            const MechanismConfig& config);

// World wheel-centre positions (front, mid, rear).
std::array<Vec2, 3> wheel_world_positions(const RoverState& state,
                                          const MechanismConfig& config);

// 2x5 Jacobian of one wheel centre with respect to the generalized
// coordinates (x, z, pitch, q3, q4), by central finite differences.
using PointJacobian = std::array<std::array<double, 5>, 2>;
std::array<PointJacobian, 3> wheel_jacobians(const RoverState& state,
                                             const MechanismConfig& config,
                                             double h = 1e-6);

// Wheel-centre velocities induced by the current generalized velocities.
std::array<Vec2, 3> wheel_world_velocities(const RoverState& state,
                                           const MechanismConfig& config);

// 5x5 generalized mass matrix at the current configuration.
using MassMatrix = std::array<std::array<double, 5>, 5>;
MassMatrix mass_matrix(const RoverState& state, const BodyParams& params,
                       const MechanismConfig& config);

// Kinetic energy plus every conservative store the dynamics models: gravity,
// wheel-contact springs, the extension stop, and (in passive mode) the
// torsion springs.  Dampers and the inelastic stops only ever remove energy,
// so this total is non-increasing for an unactuated rover.
double total_energy(const RoverState& state, SuspensionMode mode, const TerrainProfile& profile,
                    const BodyParams& params, const MechanismConfig& config);

}  // namespace rover
