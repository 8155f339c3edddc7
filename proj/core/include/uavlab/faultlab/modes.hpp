#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace uavlab::faultlab {

enum class FaultLocation { None, Gps, Imu, Actuator };

enum class FaultMode {
  GpsDeception,
  GpsWeakSignal,
  GpsWeakerSignal,
  GpsInterruption,
  ImuMultiplicative,
  ImuConstantDeviation,
  ImuDrift,
  ImuTransientDrift,
  ImuDisconnect,
  ServoConstantDeviation,
  ServoStuck,
  ServoLoose,
  ServoDamage,
  ServoJitter,
};

std::string_view mode_name(FaultMode mode);
std::optional<FaultMode> parse_mode(std::string_view name);

std::string_view location_name(FaultLocation location);
std::optional<FaultLocation> parse_location(std::string_view name);

FaultLocation location_of(FaultMode mode);

/// Every mode the injector understands.
std::span<const FaultMode> all_fault_modes();

/// The thirteen modes of the standard campaign (four GPS, four IMU, five
/// servo). Transient drift is available for scenarios but not swept.
std::span<const FaultMode> campaign_fault_modes();

}  // namespace uavlab::faultlab
