#pragma once

#include <array>
#include <numbers>
#include <stdexcept>

#include "rover/vec2.hpp"

namespace rover {

struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct JointLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed five-bar suspension for one side of the rover, expressed in the
// chassis frame (origin at the chassis centre of mass, x forward, z up).
// Two control links hang from chassis pivots; their lower ends C and D are
// joined by the two bogie links, which meet at the knee joint M.  The outer
// wheels sit on straight extensions of the bogie links beyond C and D, the
// middle wheel is mounted directly on M.  Control-link angles are measured
// from the chassis-frame downward vertical, counter-clockwise positive.
// Default geometry puts the mid and rear wheel centres in the same horizontal
// plane at q3 = q4 = 0 (D-M horizontal, pivot heights solved from the link
// lengths: front pivot z = 0.2*(sqrt(3)-1)), so the rover rests level on
// those two wheels with the front wheel carried high as a swing arm.
struct MechanismConfig {
  Vec2 chassis_pivot_front{0.35, 0.14641016151377546};
  Vec2 chassis_pivot_rear{-0.05, -0.20};
  double len_link1 = 0.35;  // front bogie segment, M to C
  double len_link2 = 0.35;  // rear bogie segment, M to D
  double len_link3 = 0.20;  // rear control link, pivot to D
  double len_link4 = 0.20;  // front control link, pivot to C
  double ext_link1 = 0.15;  // front-wheel extension beyond C
  double ext_link2 = 0.40;  // rear-wheel extension beyond D
  double wheel_radius = 0.10;
  double spring_rate_front = 80.0;  // N*m/rad on the front control joint
  double spring_rate_rear = 80.0;   // N*m/rad on the rear control joint
  double spring_rest_front = 0.0;   // rad
  double spring_rest_rear = 0.0;    // rad
  double joint_limit = 37.0 * std::numbers::pi / 180.0;  // rad

  void validate() const;
};

// One solved configuration of the linkage, chassis frame.
struct MechanismPose {
  double q3 = 0.0;  // rear control-link angle
  double q4 = 0.0;  // front control-link angle
  double theta1 = 0.0;  // orientation of the M->C bogie segment
  double theta2 = 0.0;  // orientation of the M->D bogie segment
  Vec2 joint_C{};
  Vec2 joint_D{};
  Vec2 joint_M{};
  Vec2 wheel_front{};
  Vec2 wheel_mid{};
  Vec2 wheel_rear{};
};

// Solves the loop closure for given control-link angles and picks the
// knee-down branch (M below the C-D chord).  Throws JointLimitError when an
// angle is outside +/- joint_limit and UnreachableError when the bogie links
// cannot span the C-D gap.
MechanismPose solve_loop_closure(const MechanismConfig& config, double q3, double q4);

// World positions of (front, mid, rear) wheel centres for a solved pose under
// a chassis transform.
std::array<Vec2, 3> wheel_positions(const MechanismConfig& config,
                                    const MechanismPose& pose,
                                    const Pose2& chassis);

// Restoring torque of a passive torsion spring: -rate * (angle - rest).
double passive_spring_torque(double rate, double rest_angle, double angle);

// True when the loop closes at (q3, q4) with at least `margin` of slack in
// the bogie-pair extension before the straightening singularity.
bool loop_reachable(const MechanismConfig& config, double q3, double q4,
                    double margin = 0.0);

// Distance |C - D| between the control-link ends, plus its partial
// derivatives with respect to q3 and q4.  Used by the dynamics to model the
// structural stop near the extension singularity.
struct ExtensionState {
  double length = 0.0;
  double d_q3 = 0.0;
  double d_q4 = 0.0;
};
ExtensionState loop_extension(const MechanismConfig& config, double q3, double q4);

}  // namespace rover
