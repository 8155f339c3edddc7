#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "uavlab/avionics/navigation.hpp"
#include "uavlab/common/phase.hpp"

namespace uavlab::autopilot {

using avionics::NavSolution;

struct FlightPhase {
  Phase phase = Phase::LevelFlight;
  double entered_at = 0.0;
  std::optional<double> in_capture_band_since;  // climb capture timer
};

struct Waypoint {
  double north = 0.0;
  double east = 0.0;
  double altitude = 0.0;
};

/// Route and phase schedule. The route is flown leg by leg; the last
/// waypoint is the attack target.
struct MissionPlan {
  std::vector<Waypoint> waypoints;
  double cruise_speed = 40.0;
  double cruise_altitude = 400.0;
  double capture_band = 5.0;      // m
  double capture_hold = 2.0;      // s
  double level_flight_duration = std::numeric_limits<double>::infinity();  // glide trigger
  double glide_path_angle = deg2rad(6.0);
  double attack_altitude = 80.0;
  double attack_path_angle = deg2rad(20.0);
  double waypoint_radius = 150.0;

  /// Throws ConfigError on an empty route, negative altitude or bad angles.
  void validate() const;
};

/// Straight route from the origin along `heading` with a target `range`
/// metres away.
MissionPlan straight_mission(double heading, double range, double altitude, double speed);

FlightPhase phase_step(const FlightPhase& phase, const NavSolution& nav, const MissionPlan& plan);

}  // namespace uavlab::autopilot
