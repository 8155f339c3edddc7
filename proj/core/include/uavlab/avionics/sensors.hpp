#pragma once

#include <optional>

#include "uavlab/avionics/rng.hpp"
#include "uavlab/common/units.hpp"
#include "uavlab/flightdyn/state.hpp"

namespace uavlab::avionics {

using flightdyn::EulerAngles;
using flightdyn::RigidBodyState;
using flightdyn::Vec3;

/// Truth sample handed to the sensors: the state plus the specific force
/// (non-gravitational acceleration) in body axes.
struct TruthSample {
  RigidBodyState state;
  Vec3 specific_force = Vec3::Zero();
};

struct ImuReading {
  double time = 0.0;
  EulerAngles attitude;
  Vec3 rates = Vec3::Zero();
  Vec3 specific_force = Vec3::Zero();
  bool healthy = true;
};

struct GpsReading {
  double time = 0.0;
  double latitude = 0.0;   // deg
  double longitude = 0.0;  // deg
  double altitude = 0.0;   // m
  double ground_speed = 0.0;
  int satellites = 0;
  bool fix_valid = false;
  bool received = true;  // false when the epoch produced no message at all
};

/// Pitot airspeed. Not part of the fault catalogue.
struct AirDataReading {
  double time = 0.0;
  double airspeed = 0.0;
};

struct ImuNoise {
  double attitude_sigma = deg2rad(0.05);
  double rate_sigma = deg2rad(0.1);
  double accel_sigma = 0.02;  // m/s^2
};

struct GpsNoise {
  double horizontal_sigma = 0.01;  // m
  double vertical_sigma = 0.02;    // m
  double speed_sigma = 0.03;       // m/s
  int satellites = 15;
  int validity_threshold = 8;
};

/// Scenario origin for the flat-Earth lat/lon conversion.
struct GeoOrigin {
  double latitude = 34.0;   // deg
  double longitude = 108.0;
};

inline constexpr double kMetersPerDegree = 111320.0;

/// Local north/east offset (m) -> latitude/longitude (deg) about `origin`.
std::pair<double, double> ned_to_geodetic(double north, double east, const GeoOrigin& origin);
std::pair<double, double> geodetic_to_ned(double latitude, double longitude, const GeoOrigin& origin);

ImuReading imu_measure(const TruthSample& truth, const ImuNoise& noise, RngStream& rng);
GpsReading gps_measure(const RigidBodyState& truth, const GeoOrigin& origin, const GpsNoise& noise,
                       RngStream& rng);
AirDataReading airspeed_measure(const RigidBodyState& truth, double sigma, RngStream& rng);

}  // namespace uavlab::avionics
