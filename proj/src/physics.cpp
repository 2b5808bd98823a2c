#include "rover/physics.hpp"

#include <algorithm>
#include <cmath>

namespace rover {

namespace {

constexpr int kNumCoords = 5;   // x, z, pitch, q3, q4
constexpr int kNumPoints = 7;   // 2 control links, 2 bogies, 3 wheels
constexpr int kWheelBase = 4;   // index of the front wheel in the point set

using Coords = std::array<double, kNumCoords>;
using PointSet = std::array<Vec2, kNumPoints>;

// Loop closure without the joint-limit gate; the integrator enforces limits
// itself and finite-difference probes may sit marginally outside them.
MechanismPose solve_raw(const MechanismConfig& config, double q3, double q4) {
  const double lim = config.joint_limit;
  MechanismConfig relaxed = config;
  relaxed.joint_limit = std::max(lim, std::max(std::abs(q3), std::abs(q4))) + 1.0;
  return solve_loop_closure(relaxed, q3, q4);
}

// Mass-point layout: control-link centres, bogie centres, wheel centres.
PointSet points_world(const MechanismConfig& config, const Coords& u) {
  const MechanismPose mp = solve_raw(config, u[3], u[4]);
  const Pose2 pose{{u[0], u[1]}, u[2]};
  PointSet pts;
  pts[0] = pose.apply((config.chassis_pivot_front + mp.joint_C) * 0.5);
  pts[1] = pose.apply((config.chassis_pivot_rear + mp.joint_D) * 0.5);
  pts[2] = pose.apply((mp.joint_M + mp.wheel_front) * 0.5);
  pts[3] = pose.apply((mp.joint_M + mp.wheel_rear) * 0.5);
  pts[4] = pose.apply(mp.wheel_front);
  pts[5] = pose.apply(mp.wheel_mid);
  pts[6] = pose.apply(mp.wheel_rear);
  return pts;
}

std::array<double, kNumPoints> point_masses(const BodyParams& params) {
  return {params.control_link_mass, params.control_link_mass,
          params.bogie_mass,        params.bogie_mass,
          params.wheel_mass,        params.wheel_mass,
          params.wheel_mass};
}

Coords gen_coords(const RoverState& s) {
  return {s.chassis_x, s.chassis_z, s.pitch, s.q3, s.q4};
}

Coords gen_rates(const RoverState& s) {
  return {s.vx, s.vz, s.pitch_rate, s.q3_rate, s.q4_rate};
}

// Pitch Jacobian of the chassis centre of mass (the body-frame offset rotated
// into world axes, then turned 90 degrees).  Couples chassis translation to
// pitch whenever the offset is nonzero.
Vec2 chassis_com_jacobian(const BodyParams& params, double pitch) {
  const double c = std::cos(pitch), s = std::sin(pitch);
  return {-params.chassis_com_x * s - params.chassis_com_z * c,
          params.chassis_com_x * c - params.chassis_com_z * s};
}

using JacobianSet = std::array<PointJacobian, kNumPoints>;

JacobianSet point_jacobians(const MechanismConfig& config, const Coords& u, double h) {
  JacobianSet jac{};
  for (int k = 0; k < kNumCoords; ++k) {
    Coords up = u, um = u;
    up[k] += h;
    um[k] -= h;
    const PointSet pp = points_world(config, up);
    const PointSet pm = points_world(config, um);
    for (int i = 0; i < kNumPoints; ++i) {
      jac[i][0][k] = (pp[i].x - pm[i].x) / (2.0 * h);
      jac[i][1][k] = (pp[i].z - pm[i].z) / (2.0 * h);
    }
  }
  return jac;
}

// Second directional difference along the generalized velocity: the
// convective (velocity-product) acceleration of each mass point.
PointSet convective_acceleration(const MechanismConfig& config, const Coords& u,
                                 const Coords& du, const PointSet& center) {
  double rate_scale = 1.0;
  for (double v : du) rate_scale = std::max(rate_scale, std::abs(v));
  const double s = 1e-4 / rate_scale;
  Coords up = u, um = u;
  for (int k = 0; k < kNumCoords; ++k) {
    up[k] += s * du[k];
    um[k] -= s * du[k];
  }
  const PointSet pp = points_world(config, up);
  const PointSet pm = points_world(config, um);
  PointSet acc;
  for (int i = 0; i < kNumPoints; ++i) {
    acc[i].x = (pp[i].x - 2.0 * center[i].x + pm[i].x) / (s * s);
    acc[i].z = (pp[i].z - 2.0 * center[i].z + pm[i].z) / (s * s);
  }
  return acc;
}

// Dense symmetric positive-definite solve via Cholesky.
Coords solve_spd(std::array<std::array<double, kNumCoords>, kNumCoords> m, Coords b) {
  for (int i = 0; i < kNumCoords; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = m[i][j];
      for (int k = 0; k < j; ++k) sum -= m[i][k] * m[j][k];
      if (i == j) {
        if (sum <= 0.0) throw NumericalBlowupError("mass matrix not positive definite");
        m[i][i] = std::sqrt(sum);
      } else {
        m[i][j] = sum / m[j][j];
      }
    }
  }
  for (int i = 0; i < kNumCoords; ++i) {
    double sum = b[i];
    for (int k = 0; k < i; ++k) sum -= m[i][k] * b[k];
    b[i] = sum / m[i][i];
  }
  for (int i = kNumCoords - 1; i >= 0; --i) {
    double sum = b[i];
    for (int k = i + 1; k < kNumCoords; ++k) sum -= m[k][i] * b[k];
    b[i] = sum / m[i][i];
  }
  return b;
}

}  // namespace

void BodyParams::validate() const {
  if (chassis_mass <= 0 || chassis_inertia <= 0)
    throw std::invalid_argument("chassis mass and inertia must be positive");
  if (control_link_mass < 0 || bogie_mass < 0 || wheel_mass <= 0)
    throw std::invalid_argument("link masses must be non-negative, wheel mass positive");
  if (joint_rotor_inertia <= 0)
    throw std::invalid_argument("joint rotor inertia must be positive");
  if (joint_damping < 0) throw std::invalid_argument("joint damping must be non-negative");
  if (contact_stiffness <= 0 || contact_damping < 0)
    throw std::invalid_argument("contact stiffness must be positive, damping non-negative");
  if (friction_coeff < 0.0 || friction_coeff > 2.0)
    throw std::invalid_argument("friction coefficient outside [0, 2]");
  if (slip_ref <= 0) throw std::invalid_argument("slip reference speed must be positive");
  if (ext_stop_margin <= 0 || ext_stop_stiffness <= 0 || ext_stop_damping < 0)
    throw std::invalid_argument("extension stop parameters out of range");
  if (gravity <= 0) throw std::invalid_argument("gravity must be positive");
  if (dt <= 0 || dt > 0.01) throw std::invalid_argument("dt must lie in (0, 0.01]");
}

ContactResult contact_force(const Vec2& wheel_center, double wheel_radius,
                            const TerrainProfile& profile, const Vec2& wheel_velocity,
                            const BodyParams& params) {
  ContactResult out;
  const SurfacePoint sp = nearest_surface(profile, wheel_center);
  out.feature = sp.feature;
  const double depth = wheel_radius - sp.distance;
  if (depth <= 0.0) return out;

  out.touching = true;
  out.penetration = depth;

  const Vec2 n = sp.normal;
  const double v_sep = n.dot(wheel_velocity);  // rate of increasing clearance
  double normal_force = params.contact_stiffness * depth - params.contact_damping * v_sep;
  normal_force = std::max(0.0, normal_force);

  // Forward-rolling tangent; the commanded wheel surface speed enters the
  // slip so traction saturates at friction_coeff * normal load.
  const Vec2 t{n.z, -n.x};
  const double slip = t.dot(wheel_velocity) - params.drive_speed;
  const double sat = std::clamp(slip / params.slip_ref, -1.0, 1.0);
  const double tangent_force = -params.friction_coeff * normal_force * sat;

  out.force = n * normal_force + t * tangent_force;
  return out;
}

RoverState step_dynamics(const RoverState& state, SuspensionMode mode,
                         std::pair<double, double> joint_torques,
                         const TerrainProfile& profile, const BodyParams& params,
                         const MechanismConfig& config) {
  const Coords u = gen_coords(state);
  const Coords du = gen_rates(state);
  const std::array<double, kNumPoints> masses = point_masses(params);

  const PointSet pts = points_world(config, u);
  const JacobianSet jac = point_jacobians(config, u, 1e-6);
  const PointSet conv = convective_acceleration(config, u, du, pts);

  std::array<std::array<double, kNumCoords>, kNumCoords> mass{};
  Coords rhs{};

  // Chassis terms are closed-form: translation plus the centre-of-mass offset
  // swinging with pitch (parallel-axis inertia, translation-pitch coupling,
  // gravity moment and centripetal pull).
  const Vec2 cj = chassis_com_jacobian(params, u[2]);
  mass[0][0] = params.chassis_mass;
  mass[1][1] = params.chassis_mass;
  mass[2][0] = params.chassis_mass * cj.x;
  mass[2][1] = params.chassis_mass * cj.z;
  mass[2][2] = params.chassis_inertia + params.chassis_mass * (cj.x * cj.x + cj.z * cj.z);
  mass[3][3] = params.joint_rotor_inertia;
  mass[4][4] = params.joint_rotor_inertia;
  rhs[1] -= params.chassis_mass * params.gravity;
  rhs[2] -= params.chassis_mass * params.gravity * cj.z;
  rhs[0] += params.chassis_mass * du[2] * du[2] * cj.z;
  rhs[1] -= params.chassis_mass * du[2] * du[2] * cj.x;

  for (int i = 0; i < kNumPoints; ++i) {
    const double m = masses[i];
    if (m == 0.0) continue;
    for (int a = 0; a < kNumCoords; ++a) {
      for (int b = 0; b <= a; ++b)
        mass[a][b] += m * (jac[i][0][a] * jac[i][0][b] + jac[i][1][a] * jac[i][1][b]);
      rhs[a] -= m * params.gravity * jac[i][1][a];
      rhs[a] -= m * (jac[i][0][a] * conv[i].x + jac[i][1][a] * conv[i].z);
    }
  }
  for (int a = 0; a < kNumCoords; ++a)
    for (int b = a + 1; b < kNumCoords; ++b) mass[a][b] = mass[b][a];

  // The solve matrix starts as the mass matrix and absorbs dt-scaled velocity
  // gains of the contact spring-dampers and the slip servo, so those forces
  // act on the end-of-step velocity and depth.  Evaluated explicitly they
  // ring at impact and pump energy; the implicit form can only dissipate.
  std::array<std::array<double, kNumCoords>, kNumCoords> solver = mass;
  const auto add_velocity_gain = [&](const std::array<double, kNumCoords>& dir, double gain) {
    for (int a = 0; a < kNumCoords; ++a)
      for (int b = 0; b < kNumCoords; ++b)
        solver[a][b] += params.dt * gain * dir[a] * dir[b];
  };

  // Wheel contacts, mapped through the wheel Jacobians.  The spring pushes
  // against the end-of-step penetration (depth - dt * separation rate), which
  // also lets a contact engage in the step it first lands instead of one step
  // late with a free depth; the published flags keep the plain depth > 0 test.
  std::array<bool, 3> touching{false, false, false};
  for (int w = 0; w < 3; ++w) {
    const int i = kWheelBase + w;
    Vec2 vel{};
    for (int k = 0; k < kNumCoords; ++k) {
      vel.x += jac[i][0][k] * du[k];
      vel.z += jac[i][1][k] * du[k];
    }
    const SurfacePoint sp = nearest_surface(profile, pts[i]);
    const double depth = config.wheel_radius - sp.distance;
    touching[w] = depth > 0.0;
    const Vec2 n = sp.normal;
    const double v_sep = n.dot(vel);
    if (depth <= 0.0 && depth - params.dt * v_sep <= 0.0) continue;
    const double normal_gain =
        params.contact_stiffness * params.dt + params.contact_damping;
    const double normal_force = params.contact_stiffness * depth - normal_gain * v_sep;
    if (normal_force <= 0.0) continue;

    const Vec2 t{n.z, -n.x};
    const double slip = t.dot(vel) - params.drive_speed;
    const double sat = std::clamp(slip / params.slip_ref, -1.0, 1.0);
    const double tangent_force = -params.friction_coeff * normal_force * sat;

    std::array<double, kNumCoords> along_n{}, along_t{};
    for (int a = 0; a < kNumCoords; ++a) {
      along_n[a] = jac[i][0][a] * n.x + jac[i][1][a] * n.z;
      along_t[a] = jac[i][0][a] * t.x + jac[i][1][a] * t.z;
      rhs[a] += along_n[a] * normal_force + along_t[a] * tangent_force;
    }
    add_velocity_gain(along_n, normal_gain);
    if (std::abs(sat) < 1.0)
      add_velocity_gain(along_t, params.friction_coeff * normal_force / params.slip_ref);
  }

  // Joint actuation: torsion springs in passive mode, commanded torques in
  // active mode, viscous damping always.
  double tau_front = 0.0, tau_rear = 0.0;
  if (mode == SuspensionMode::active) {
    tau_front = joint_torques.first;
    tau_rear = joint_torques.second;
  } else {
    tau_front = passive_spring_torque(config.spring_rate_front,
                                      config.spring_rest_front, state.q4);
    tau_rear = passive_spring_torque(config.spring_rate_rear,
                                     config.spring_rest_rear, state.q3);
  }
  rhs[3] += tau_rear - params.joint_damping * state.q3_rate;
  rhs[4] += tau_front - params.joint_damping * state.q4_rate;
  solver[3][3] += params.dt * params.joint_damping;
  solver[4][4] += params.dt * params.joint_damping;

  // One-sided stop before the bogie pair straightens out, with the same
  // end-of-step treatment as the contacts.
  {
    const ExtensionState ext = loop_extension(config, state.q3, state.q4);
    const double limit = config.len_link1 + config.len_link2 - params.ext_stop_margin;
    const double over = ext.length - limit;
    const double rate = ext.d_q3 * state.q3_rate + ext.d_q4 * state.q4_rate;
    const double gain = params.ext_stop_stiffness * params.dt + params.ext_stop_damping;
    const double f = params.ext_stop_stiffness * over + gain * rate;
    if ((over > 0.0 || over + params.dt * rate > 0.0) && f > 0.0) {
      rhs[3] -= f * ext.d_q3;
      rhs[4] -= f * ext.d_q4;
      add_velocity_gain({0.0, 0.0, 0.0, ext.d_q3, ext.d_q4}, gain);
    }
  }

  const Coords accel = solve_spd(solver, rhs);

  Coords new_du{};
  for (int k = 0; k < kNumCoords; ++k) new_du[k] = du[k] + params.dt * accel[k];

  // Angular travel stops are inelastic: a joint rate that would carry the
  // coordinate past its limit this step is cancelled by an impulse solved
  // through the mass matrix, so the momentum lands in the coupled coordinates
  // and kinetic energy can only drop.  Acting on the rate before positions
  // move keeps the coordinate inside the limit instead of clamping it back
  // from outside, which would teleport potential energy.  Two sweeps settle
  // the case where cancelling one joint pushes the other back out.
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int k = 3; k <= 4; ++k) {
      const double predicted = u[k] + params.dt * new_du[k];
      const bool outward_high = predicted > config.joint_limit && new_du[k] > 0.0;
      const bool outward_low = predicted < -config.joint_limit && new_du[k] < 0.0;
      if (!outward_high && !outward_low) continue;
      Coords unit{};
      unit[k] = 1.0;
      const Coords response = solve_spd(mass, unit);
      const double impulse = -new_du[k] / response[k];
      for (int i = 0; i < kNumCoords; ++i) new_du[i] += impulse * response[i];
    }
  }

  Coords new_u{};
  for (int k = 0; k < kNumCoords; ++k) new_u[k] = u[k] + params.dt * new_du[k];
  new_u[3] = std::clamp(new_u[3], -config.joint_limit, config.joint_limit);
  new_u[4] = std::clamp(new_u[4], -config.joint_limit, config.joint_limit);

  // Last-resort guard: never leave the closable region.  The extension stop
  // normally prevents this; an inelastic projection handles the residue.
  if (!loop_reachable(config, new_u[3], new_u[4], 1e-4)) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double q3m = u[3] + mid * (new_u[3] - u[3]);
      const double q4m = u[4] + mid * (new_u[4] - u[4]);
      if (loop_reachable(config, q3m, q4m, 1e-4))
        lo = mid;
      else
        hi = mid;
    }
    new_u[3] = u[3] + lo * (new_u[3] - u[3]);
    new_u[4] = u[4] + lo * (new_u[4] - u[4]);
    new_du[3] = 0.0;
    new_du[4] = 0.0;
  }

  for (int k = 0; k < kNumCoords; ++k) {
    if (!std::isfinite(new_u[k]) || !std::isfinite(new_du[k]) ||
        std::abs(new_u[k]) > 1e6 || std::abs(new_du[k]) > 1e6)
      throw NumericalBlowupError("state diverged during integration");
  }

  RoverState next = state;
  next.chassis_x = new_u[0];
  next.chassis_z = new_u[1];
  next.pitch = new_u[2];
  next.q3 = new_u[3];
  next.q4 = new_u[4];
  next.vx = new_du[0];
  next.vz = new_du[1];
  next.pitch_rate = new_du[2];
  next.q3_rate = new_du[3];
  next.q4_rate = new_du[4];
  next.wheel_contact = touching;
  next.sim_time = state.sim_time + params.dt;
  return next;
}

double distance_to_obstacle(const RoverState& state, const TerrainProfile& profile,
                            const MechanismConfig& config) {
  const std::array<Vec2, 3> wheels = wheel_world_positions(state, config);
  double leading = wheels[0].x;
  for (const Vec2& w : wheels) leading = std::max(leading, w.x);
  leading += config.wheel_radius;
  return profile.step_x - leading;
}

std::array<Vec2, 3> wheel_world_positions(const RoverState& state,
                                          const MechanismConfig& config) {
  const PointSet pts = points_world(config, gen_coords(state));
  return {pts[4], pts[5], pts[6]};
}

std::array<PointJacobian, 3> wheel_jacobians(const RoverState& state,
                                             const MechanismConfig& config, double h) {
  const Coords u = gen_coords(state);
  std::array<PointJacobian, 3> jac{};
  for (int k = 0; k < kNumCoords; ++k) {
    Coords up = u, um = u;
    up[k] += h;
    um[k] -= h;
    const PointSet pp = points_world(config, up);
    const PointSet pm = points_world(config, um);
    for (int w = 0; w < 3; ++w) {
      jac[w][0][k] = (pp[kWheelBase + w].x - pm[kWheelBase + w].x) / (2.0 * h);
      jac[w][1][k] = (pp[kWheelBase + w].z - pm[kWheelBase + w].z) / (2.0 * h);
    }
  }
  return jac;
}

std::array<Vec2, 3> wheel_world_velocities(const RoverState& state,
                                           const MechanismConfig& config) {
  const std::array<PointJacobian, 3> jac = wheel_jacobians(state, config);
  const Coords du = gen_rates(state);
  std::array<Vec2, 3> vel{};
  for (int w = 0; w < 3; ++w) {
    for (int k = 0; k < kNumCoords; ++k) {
      vel[w].x += jac[w][0][k] * du[k];
      vel[w].z += jac[w][1][k] * du[k];
    }
  }
  return vel;
}

MassMatrix mass_matrix(const RoverState& state, const BodyParams& params,
                       const MechanismConfig& config) {
  const Coords u = gen_coords(state);
  const JacobianSet jac = point_jacobians(config, u, 1e-6);
  const std::array<double, kNumPoints> masses = point_masses(params);
  MassMatrix mass{};
  const Vec2 cj = chassis_com_jacobian(params, u[2]);
  mass[0][0] = params.chassis_mass;
  mass[1][1] = params.chassis_mass;
  mass[2][0] = params.chassis_mass * cj.x;
  mass[2][1] = params.chassis_mass * cj.z;
  mass[2][2] = params.chassis_inertia + params.chassis_mass * (cj.x * cj.x + cj.z * cj.z);
  mass[3][3] = params.joint_rotor_inertia;
  mass[4][4] = params.joint_rotor_inertia;
  for (int i = 0; i < kNumPoints; ++i) {
    const double m = masses[i];
    if (m == 0.0) continue;
    for (int a = 0; a < kNumCoords; ++a)
      for (int b = 0; b <= a; ++b)
        mass[a][b] += m * (jac[i][0][a] * jac[i][0][b] + jac[i][1][a] * jac[i][1][b]);
  }
  for (int a = 0; a < kNumCoords; ++a)
    for (int b = a + 1; b < kNumCoords; ++b) mass[a][b] = mass[b][a];
  return mass;
}

double total_energy(const RoverState& state, SuspensionMode mode, const TerrainProfile& profile,
                    const BodyParams& params, const MechanismConfig& config) {
  const Coords u = gen_coords(state);
  const Coords du = gen_rates(state);
  const MassMatrix mass = mass_matrix(state, params, config);

  double kinetic = 0.0;
  for (int a = 0; a < kNumCoords; ++a)
    for (int b = 0; b < kNumCoords; ++b) kinetic += 0.5 * du[a] * mass[a][b] * du[b];

  const double com_z = state.chassis_z + params.chassis_com_x * std::sin(state.pitch) +
                       params.chassis_com_z * std::cos(state.pitch);
  double potential = params.chassis_mass * params.gravity * com_z;
  const PointSet pts = points_world(config, u);
  const std::array<double, kNumPoints> masses = point_masses(params);
  for (int i = 0; i < kNumPoints; ++i) potential += masses[i] * params.gravity * pts[i].z;

  // Contact springs store 1/2 k delta^2 per penetrating wheel.
  for (int w = 0; w < 3; ++w) {
    const SurfacePoint sp = nearest_surface(profile, pts[kWheelBase + w]);
    const double depth = config.wheel_radius - sp.distance;
    if (depth > 0.0) potential += 0.5 * params.contact_stiffness * depth * depth;
  }

  // Extension-stop spring.
  {
    const ExtensionState ext = loop_extension(config, state.q3, state.q4);
    const double over =
        ext.length - (config.len_link1 + config.len_link2 - params.ext_stop_margin);
    if (over > 0.0) potential += 0.5 * params.ext_stop_stiffness * over * over;
  }

  if (mode == SuspensionMode::passive) {
    const double df = state.q4 - config.spring_rest_front;
    const double dr = state.q3 - config.spring_rest_rear;
    potential += 0.5 * config.spring_rate_front * df * df;
    potential += 0.5 * config.spring_rate_rear * dr * dr;
  }
  return kinetic + potential;
}

}  // namespace rover
