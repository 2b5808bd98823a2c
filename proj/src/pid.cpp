#include "rover/pid.hpp"

#include <algorithm>
#include <stdexcept>

namespace rover {

void PidGains::validate() const {
  if (kp < 0 || ki < 0 || kd < 0) throw std::invalid_argument("PID gains must be non-negative");
  if (torque_limit <= 0) throw std::invalid_argument("torque limit must be positive");
  if (integral_limit < 0) throw std::invalid_argument("integral limit must be non-negative");
}

double pid_step(const PidGains& gains, PidState& state, double setpoint,
                double measured, double dt) {
  if (dt <= 0) throw std::invalid_argument("pid_step requires dt > 0");
  const double error = setpoint - measured;

  state.integral += error * dt;
  state.integral = std::clamp(state.integral, -gains.integral_limit, gains.integral_limit);

  double derivative = 0.0;
  if (state.initialized) derivative = (error - state.prev_error) / dt;
  state.prev_error = error;
  state.initialized = true;

  const double raw = gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
  return std::clamp(raw, -gains.torque_limit, gains.torque_limit);
}

}  // namespace rover
