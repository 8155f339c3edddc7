#include "uavlab/flightdyn/atmosphere.hpp"

#include <cmath>
#include <string>

#include "uavlab/common/error.hpp"
#include "uavlab/common/units.hpp"

namespace uavlab::flightdyn {
namespace {

constexpr double kSeaLevelTemperature = 288.15;  // K
constexpr double kSeaLevelPressure = 101325.0;   // Pa
constexpr double kLapseRate = 0.0065;            // K/m
constexpr double kGasConstant = 287.05287;       // J/(kg K)
constexpr double kHeatRatio = 1.4;
constexpr double kIsaGravity = 9.80665;

}  // namespace

AirData standard_atmosphere(double altitude_m) {
  if (!(altitude_m >= kIsaMinAltitude && altitude_m <= kIsaMaxAltitude)) {
    throw ConfigError("standard_atmosphere: altitude " + std::to_string(altitude_m) +
                      " m outside [-500, 11000] m");
  }
  const double temperature = kSeaLevelTemperature - kLapseRate * altitude_m;
  const double pressure =
      kSeaLevelPressure * std::pow(temperature / kSeaLevelTemperature,
                                   kIsaGravity / (kLapseRate * kGasConstant));
  AirData air;
  air.density = pressure / (kGasConstant * temperature);
  air.speed_of_sound = std::sqrt(kHeatRatio * kGasConstant * temperature);
  return air;
}

AirData air_data(const RigidBodyState& state) {
  AirData air = standard_atmosphere(state.altitude());
  const Vec3& v = state.velocity_body;
  air.airspeed = v.norm();
  if (air.airspeed > 1e-9) {
    air.alpha = std::atan2(v.z(), v.x());
    air.beta = std::asin(std::clamp(v.y() / air.airspeed, -1.0, 1.0));
  }
  return air;
}

}  // namespace uavlab::flightdyn
