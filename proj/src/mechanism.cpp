#include "rover/mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace rover {

namespace {

Vec2 link_end(const Vec2& pivot, double length, double angle) {
  // Angle measured from the downward vertical, counter-clockwise positive.
  return {pivot.x + length * std::sin(angle), pivot.z - length * std::cos(angle)};
}

}  // namespace

void MechanismConfig::validate() const {
  if (len_link1 <= 0 || len_link2 <= 0 || len_link3 <= 0 || len_link4 <= 0)
    throw std::invalid_argument("link lengths must be positive");
  if (ext_link1 < 0 || ext_link2 < 0)
    throw std::invalid_argument("wheel extensions must be non-negative");
  if (wheel_radius <= 0) throw std::invalid_argument("wheel radius must be positive");
  if (spring_rate_front < 0 || spring_rate_rear < 0)
    throw std::invalid_argument("spring rates must be non-negative");
  if (joint_limit <= 0) throw std::invalid_argument("joint limit must be positive");
}

MechanismPose solve_loop_closure(const MechanismConfig& config, double q3, double q4) {
  const double lim = config.joint_limit + 1e-12;
  if (std::abs(q3) > lim || std::abs(q4) > lim)
    throw JointLimitError("control-link angle outside joint limit");

  const Vec2 C = link_end(config.chassis_pivot_front, config.len_link4, q4);
  const Vec2 D = link_end(config.chassis_pivot_rear, config.len_link3, q3);
  const double l1 = config.len_link1, l2 = config.len_link2;

  const Vec2 cd = D - C;
  const double L = cd.norm();
  if (L > l1 + l2 + 1e-9)
    throw UnreachableError("bogie links cannot span the control-link gap");
  if (L + 1e-9 < std::abs(l1 - l2))
    throw UnreachableError("control-link gap inside the bogie-link annulus");
  if (L < 1e-12) throw UnreachableError("control-link ends coincide");

  // Circle-circle intersection: M lies at distance l1 from C and l2 from D.
  const double a = (l1 * l1 - l2 * l2 + L * L) / (2.0 * L);
  const double h2 = l1 * l1 - a * a;
  const double h = std::sqrt(std::max(0.0, h2));
  const Vec2 e = cd / L;
  const Vec2 base = C + e * a;
  const Vec2 n = e.perp();

  const Vec2 m_plus = base + n * h;
  const Vec2 m_minus = base - n * h;
  // Knee-down branch: the joint deflects below the C-D chord.  The alternate
  // root is the collapsed configuration and is never selected.
  Vec2 M = m_plus;
  if (m_minus.z < m_plus.z || (m_minus.z == m_plus.z && m_minus.x < m_plus.x))
    M = m_minus;

  MechanismPose pose;
  pose.q3 = q3;
  pose.q4 = q4;
  pose.joint_C = C;
  pose.joint_D = D;
  pose.joint_M = M;
  const Vec2 mc = (C - M) / l1;
  const Vec2 md = (D - M) / l2;
  pose.theta1 = std::atan2(mc.z, mc.x);
  pose.theta2 = std::atan2(md.z, md.x);
  pose.wheel_front = C + mc * config.ext_link1;
  pose.wheel_mid = M;
  pose.wheel_rear = D + md * config.ext_link2;
  return pose;
}

std::array<Vec2, 3> wheel_positions(const MechanismConfig& /*config*/,
                                    const MechanismPose& pose,
                                    const Pose2& chassis) {
  return {chassis.apply(pose.wheel_front), chassis.apply(pose.wheel_mid),
          chassis.apply(pose.wheel_rear)};
}

double passive_spring_torque(double rate, double rest_angle, double angle) {
  return -rate * (angle - rest_angle);
}

bool loop_reachable(const MechanismConfig& config, double q3, double q4, double margin) {
  const Vec2 C = link_end(config.chassis_pivot_front, config.len_link4, q4);
  const Vec2 D = link_end(config.chassis_pivot_rear, config.len_link3, q3);
  const double L = (D - C).norm();
  return L <= config.len_link1 + config.len_link2 - margin &&
         L >= std::abs(config.len_link1 - config.len_link2) + 1e-12;
}

ExtensionState loop_extension(const MechanismConfig& config, double q3, double q4) {
  const Vec2 C = link_end(config.chassis_pivot_front, config.len_link4, q4);
  const Vec2 D = link_end(config.chassis_pivot_rear, config.len_link3, q3);
  const Vec2 cd = D - C;
  ExtensionState ext;
  ext.length = cd.norm();
  if (ext.length < 1e-12) return ext;
  const Vec2 e = cd / ext.length;
  // dC/dq4 and dD/dq3 are the tangents of the control-link end circles.
  const Vec2 dC{config.len_link4 * std::cos(q4), config.len_link4 * std::sin(q4)};
  const Vec2 dD{config.len_link3 * std::cos(q3), config.len_link3 * std::sin(q3)};
  ext.d_q4 = -e.dot(dC);
  ext.d_q3 = e.dot(dD);
  return ext;
}

}  // namespace rover
