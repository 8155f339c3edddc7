#pragma once

#include <array>

#include "uavlab/common/signals.hpp"
#include "uavlab/common/units.hpp"

namespace uavlab::avionics {

struct ServoConfig {
  double time_constant = 0.05;         // s
  double rate_limit = deg2rad(200.0);  // rad/s
  double position_limit = deg2rad(25.0);
  double throttle_time_constant = 0.1;  // s
};

/// Current actual positions; advanced in place by servo_dynamics.
struct ServoState {
  SurfaceActual actual;
};

/// First-order lag toward the command, then rate limit, then position limit.
/// The lag is integrated exactly over dt so the response is independent of
/// the step size.
SurfaceActual servo_dynamics(const ControlCommand& command, ServoState& state, double dt,
                             const ServoConfig& config = {});

}  // namespace uavlab::avionics
