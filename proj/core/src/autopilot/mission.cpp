#include "uavlab/autopilot/mission.hpp"

#include <cmath>

#include "uavlab/common/error.hpp"

namespace uavlab::autopilot {

void MissionPlan::validate() const {
  if (waypoints.empty()) throw ConfigError("mission needs at least one waypoint");
  for (const auto& w : waypoints) {
    if (!(std::isfinite(w.north) && std::isfinite(w.east) && w.altitude >= 0.0)) {
      throw ConfigError("waypoint altitude must be >= 0 and coordinates finite");
    }
  }
  if (!(cruise_speed > 0.0)) throw ConfigError("cruise speed must be positive");
  if (!(cruise_altitude >= 0.0)) throw ConfigError("cruise altitude must be >= 0");
  if (!(capture_band > 0.0 && capture_hold >= 0.0)) throw ConfigError("bad altitude capture settings");
  if (!(level_flight_duration > 0.0)) throw ConfigError("level flight duration must be positive");
  if (!(glide_path_angle > 0.0 && glide_path_angle < deg2rad(45.0))) {
    throw ConfigError("glide path angle must be in (0, 45) deg");
  }
  if (!(attack_path_angle > 0.0 && attack_path_angle < deg2rad(60.0))) {
    throw ConfigError("attack path angle must be in (0, 60) deg");
  }
  if (!(attack_altitude >= 0.0)) throw ConfigError("attack altitude must be >= 0");
  if (!(waypoint_radius > 0.0)) throw ConfigError("waypoint radius must be positive");
}

MissionPlan straight_mission(double heading, double range, double altitude, double speed) {
  MissionPlan plan;
  plan.cruise_altitude = altitude;
  plan.cruise_speed = speed;
  plan.waypoints.push_back({range * std::cos(heading), range * std::sin(heading), 0.0});
  return plan;
}

FlightPhase phase_step(const FlightPhase& current, const NavSolution& nav, const MissionPlan& plan) {
  FlightPhase next = current;
  const double t = nav.time;
  switch (current.phase) {
    case Phase::Climb:
      if (std::abs(nav.altitude() - plan.cruise_altitude) <= plan.capture_band) {
        if (!next.in_capture_band_since) next.in_capture_band_since = t;
        if (t - *next.in_capture_band_since >= plan.capture_hold - 1e-9) {
          return {Phase::LevelFlight, t, std::nullopt};
        }
      } else {
        next.in_capture_band_since.reset();
      }
      break;
    case Phase::LevelFlight:
      if (t - current.entered_at >= plan.level_flight_duration - 1e-9) {
        return {Phase::GlideSlope, t, std::nullopt};
      }
      break;
    case Phase::GlideSlope:
      if (nav.altitude() < plan.attack_altitude) return {Phase::Attack, t, std::nullopt};
      break;
    case Phase::Attack:
      break;
  }
  return next;
}

}  // namespace uavlab::autopilot
