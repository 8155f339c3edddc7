#include "uavlab/autopilot/failsafe.hpp"

namespace uavlab::autopilot {

std::string_view failsafe_name(FailsafeKind kind) {
  switch (kind) {
    case FailsafeKind::Nominal: return "nominal";
    case FailsafeKind::ImuPositioning: return "imu_positioning";
    case FailsafeKind::LevelFlightFallback: return "level_flight_fallback";
    case FailsafeKind::HoldLastRudder: return "hold_last_rudder";
  }
  return "unknown";
}

FailsafeMode failsafe_step(const FailsafeMode& mode, bool gps_fix_valid, bool imu_healthy, double clock,
                           const FailsafeConfig& config) {
  switch (mode.kind) {
    case FailsafeKind::LevelFlightFallback:
    case FailsafeKind::HoldLastRudder:
      return mode;
    case FailsafeKind::Nominal:
      if (!imu_healthy) return {FailsafeKind::HoldLastRudder, clock};
      if (!gps_fix_valid) return {FailsafeKind::ImuPositioning, clock};
      return mode;
    case FailsafeKind::ImuPositioning:
      if (!imu_healthy) return {FailsafeKind::HoldLastRudder, clock};
      // Tick times are multiples of the control period, so a tiny tolerance
      // keeps the switch on the tick that completes the window.
      if (clock - mode.entered_at >= config.divergence_window - 1e-9) {
        return {FailsafeKind::LevelFlightFallback, clock};
      }
      return mode;
  }
  return mode;
}

}  // namespace uavlab::autopilot
