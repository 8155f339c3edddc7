#pragma once

#include "uavlab/flightdyn/aircraft.hpp"

namespace uavlab::flightdyn {

/// Thrust along body +x, interpolated from the thrust map. Throws
/// CommandError when throttle is outside [0, 1].
Vec3 propulsion_thrust(double throttle, double airspeed, double altitude,
                       const AircraftConfig& config);

}  // namespace uavlab::flightdyn
