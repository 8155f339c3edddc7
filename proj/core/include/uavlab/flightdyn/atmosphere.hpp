#pragma once

#include "uavlab/flightdyn/state.hpp"

namespace uavlab::flightdyn {

/// Local air properties plus the air-relative flow angles of a state.
struct AirData {
  double density = 0.0;         // kg/m^3
  double speed_of_sound = 0.0;  // m/s
  double airspeed = 0.0;        // m/s
  double alpha = 0.0;           // rad
  double beta = 0.0;            // rad
};

inline constexpr double kIsaMinAltitude = -500.0;
inline constexpr double kIsaMaxAltitude = 11000.0;

/// ISA troposphere. Throws ConfigError outside [-500, 11000] m.
AirData standard_atmosphere(double altitude_m);

/// Atmosphere at the state's altitude with airspeed/alpha/beta filled in
/// (still air).
AirData air_data(const RigidBodyState& state);

}  // namespace uavlab::flightdyn
