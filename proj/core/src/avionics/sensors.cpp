#include "uavlab/avionics/sensors.hpp"

#include <cmath>

namespace uavlab::avionics {

std::pair<double, double> ned_to_geodetic(double north, double east, const GeoOrigin& origin) {
  const double lat = origin.latitude + north / kMetersPerDegree;
  const double lon =
      origin.longitude + east / (kMetersPerDegree * std::cos(deg2rad(origin.latitude)));
  return {lat, lon};
}

std::pair<double, double> geodetic_to_ned(double latitude, double longitude, const GeoOrigin& origin) {
  const double north = (latitude - origin.latitude) * kMetersPerDegree;
  const double east =
      (longitude - origin.longitude) * kMetersPerDegree * std::cos(deg2rad(origin.latitude));
  return {north, east};
}

ImuReading imu_measure(const TruthSample& truth, const ImuNoise& noise, RngStream& rng) {
  ImuReading r;
  r.time = truth.state.time;
  const EulerAngles e = truth.state.euler();
  r.attitude.roll = e.roll + gaussian(rng, noise.attitude_sigma);
  r.attitude.pitch = e.pitch + gaussian(rng, noise.attitude_sigma);
  r.attitude.yaw = wrap_pi(e.yaw + gaussian(rng, noise.attitude_sigma));
  for (int i = 0; i < 3; ++i) {
    r.rates[i] = truth.state.angular_rates[i] + gaussian(rng, noise.rate_sigma);
  }
  for (int i = 0; i < 3; ++i) {
    r.specific_force[i] = truth.specific_force[i] + gaussian(rng, noise.accel_sigma);
  }
  r.healthy = true;
  return r;
}

GpsReading gps_measure(const RigidBodyState& truth, const GeoOrigin& origin, const GpsNoise& noise,
                       RngStream& rng) {
  GpsReading r;
  r.time = truth.time;
  const double north = truth.position_ned.x() + gaussian(rng, noise.horizontal_sigma);
  const double east = truth.position_ned.y() + gaussian(rng, noise.horizontal_sigma);
  std::tie(r.latitude, r.longitude) = ned_to_geodetic(north, east, origin);
  r.altitude = truth.altitude() + gaussian(rng, noise.vertical_sigma);
  const Vec3 v = truth.velocity_ned();
  r.ground_speed = std::hypot(v.x(), v.y()) + gaussian(rng, noise.speed_sigma);
  r.satellites = noise.satellites;
  r.fix_valid = r.satellites >= noise.validity_threshold;
  return r;
}

AirDataReading airspeed_measure(const RigidBodyState& truth, double sigma, RngStream& rng) {
  return {truth.time, truth.airspeed() + gaussian(rng, sigma)};
}

}  // namespace uavlab::avionics
