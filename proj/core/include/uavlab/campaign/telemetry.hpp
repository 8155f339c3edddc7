#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavlab/autopilot/failsafe.hpp"
#include "uavlab/avionics/navigation.hpp"
#include "uavlab/common/phase.hpp"
#include "uavlab/common/signals.hpp"

namespace uavlab::campaign {

/// One logged control tick.
struct TelemetryFrame {
  double t = 0.0;
  flightdyn::Vec3 position = flightdyn::Vec3::Zero();
  flightdyn::Vec3 velocity_body = flightdyn::Vec3::Zero();
  flightdyn::EulerAngles attitude;
  flightdyn::Vec3 rates = flightdyn::Vec3::Zero();

  avionics::ImuReading imu;
  /// Latest GPS epoch as delivered to the flight computer.
  avionics::GpsReading gps;
  double airspeed = 0.0;

  avionics::NavSource nav_source = avionics::NavSource::Gps;
  Phase phase = Phase::LevelFlight;
  autopilot::FailsafeKind failsafe = autopilot::FailsafeKind::Nominal;
  ControlCommand command;
  SurfaceActual actual;
  std::string fault_labels;

  // Kept in memory only; not part of the CSV.
  double pitch_target = 0.0;
  double roll_target = 0.0;
};

/// Column names in file order.
const std::vector<std::string>& telemetry_columns();

void write_telemetry_csv(std::ostream& os, const std::vector<TelemetryFrame>& frames);
void write_telemetry_csv(const std::filesystem::path& path, const std::vector<TelemetryFrame>& frames);

/// Reads a telemetry CSV. Throws ParseError (with line and column name) on
/// malformed input.
std::vector<TelemetryFrame> read_telemetry_csv(std::istream& is);
std::vector<TelemetryFrame> read_telemetry_csv(const std::filesystem::path& path);

std::string nav_source_name(avionics::NavSource s);

}  // namespace uavlab::campaign
