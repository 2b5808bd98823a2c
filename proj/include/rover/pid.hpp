#pragma once

namespace rover {

// Joint position controller producing a torque command.  The derivative term
// acts on the error (backward difference) and the integral term is clamped to
// +/- integral_limit before use, which also freezes windup while the output
// saturates.
struct PidGains {
  double kp = 60.0;
  double ki = 5.0;
  double kd = 2.0;
  double torque_limit = 40.0;    // N*m
  double integral_limit = 0.5;   // rad*s

  void validate() const;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool initialized = false;
};

// One controller update; returns the clamped torque and advances the state.
double pid_step(const PidGains& gains, PidState& state, double setpoint,
                double measured, double dt);

}  // namespace rover
