#pragma once

#include <string_view>

#include "uavlab/common/units.hpp"

namespace uavlab::autopilot {

enum class FailsafeKind { Nominal, ImuPositioning, LevelFlightFallback, HoldLastRudder };

std::string_view failsafe_name(FailsafeKind kind);

struct FailsafeMode {
  FailsafeKind kind = FailsafeKind::Nominal;
  double entered_at = 0.0;

  friend bool operator==(const FailsafeMode&, const FailsafeMode&) = default;
};

struct FailsafeConfig {
  double divergence_window = 30.0;  // s of IMU-only positioning before falling back
  double fallback_pitch = deg2rad(3.0);
  /// Throttle while holding the last rudder. Zero by default; a scenario may
  /// keep the last nominal throttle instead.
  bool hold_zero_throttle = true;
};

/// Advances the failsafe manager.
///   Nominal -> ImuPositioning when the GPS fix is not usable.
///   ImuPositioning -> LevelFlightFallback once the window has elapsed.
///   Nominal / ImuPositioning -> HoldLastRudder when the IMU is unhealthy.
/// LevelFlightFallback and HoldLastRudder are terminal.
FailsafeMode failsafe_step(const FailsafeMode& mode, bool gps_fix_valid, bool imu_healthy, double clock,
                           const FailsafeConfig& config = {});

}  // namespace uavlab::autopilot
