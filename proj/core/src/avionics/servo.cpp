#include "uavlab/avionics/servo.hpp"

#include <algorithm>
#include <cmath>

#include "uavlab/common/error.hpp"

namespace uavlab::avionics {

namespace {

double lag(double current, double target, double tau, double dt) {
  if (tau <= 0.0) return target;
  return target + (current - target) * std::exp(-dt / tau);
}

double surface_step(double current, double command, double dt, const ServoConfig& c) {
  const double limit = c.position_limit;
  const double target = std::isfinite(command) ? std::clamp(command, -limit, limit) : current;
  double next = lag(current, target, c.time_constant, dt);
  const double max_delta = c.rate_limit * dt;
  next = std::clamp(next, current - max_delta, current + max_delta);
  return std::clamp(next, -limit, limit);
}

}  // namespace

SurfaceActual servo_dynamics(const ControlCommand& command, ServoState& state, double dt,
                             const ServoConfig& config) {
  if (!(dt > 0.0)) throw ConfigError("servo step must be positive");
  SurfaceActual& a = state.actual;
  a.elevator = surface_step(a.elevator, command.elevator, dt, config);
  a.aileron = surface_step(a.aileron, command.aileron, dt, config);
  a.rudder = surface_step(a.rudder, command.rudder, dt, config);
  const double thr = std::isfinite(command.throttle) ? std::clamp(command.throttle, 0.0, 1.0) : a.throttle;
  a.throttle = std::clamp(lag(a.throttle, thr, config.throttle_time_constant, dt), 0.0, 1.0);
  return a;
}

}  // namespace uavlab::avionics
