#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "uavlab/autopilot/controller.hpp"
#include "uavlab/avionics/navigation.hpp"
#include "uavlab/avionics/servo.hpp"
#include "uavlab/faultlab/schedule.hpp"
#include "uavlab/flightdyn/aircraft.hpp"

namespace uavlab::campaign {

/// Trim directive for the initial state: straight and level at the given
/// altitude, airspeed and heading, starting in `phase`.
struct InitialCondition {
  double altitude = 400.0;
  double airspeed = 40.0;
  double heading = deg2rad(60.0);
  Phase phase = Phase::LevelFlight;
};

struct SensorConfig {
  avionics::ImuNoise imu;
  avionics::GpsNoise gps;
  double airspeed_sigma = 0.1;  // m/s
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  double duration = 400.0;    // s
  double dt = 0.001;          // s, physics step
  int control_substeps = 10;  // physics steps per control tick
  int gps_decimation = 10;    // control ticks per GPS epoch
  double log_rate = 50.0;     // Hz

  flightdyn::AircraftConfig aircraft = flightdyn::default_aircraft();
  std::optional<std::string> aero_table_path;
  std::optional<std::string> thrust_table_path;

  InitialCondition initial;
  autopilot::MissionPlan mission;
  autopilot::AutopilotGains gains;
  autopilot::FailsafeConfig failsafe;
  avionics::GpsIntegrityConfig gps_integrity;
  avionics::ImuMonitorConfig imu_monitor;
  SensorConfig sensors;
  avionics::GeoOrigin origin;
  avionics::ServoConfig servo;
  faultlab::FaultSchedule faults;

  std::optional<std::string> telemetry_path;

  double control_period() const { return dt * control_substeps; }
  /// Control ticks between logged frames.
  int log_decimation() const;
  /// Throws ConstraintError/ConfigError when an invariant does not hold.
  void validate() const;
};

/// Default mission: trimmed at 400 m / 40 m/s heading 60 deg in level flight,
/// glide slope after 150 s, attack below 80 m, 400 s budget.
Scenario default_scenario();

/// Parses a scenario document. Errors carry the line and field path.
/// Relative table paths are resolved against `base_dir`.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Serialises the scenario (tables by reference only) so that parsing the
/// result yields an equivalent scenario.
std::string scenario_to_json(const Scenario& scenario);

}  // namespace uavlab::campaign
