#include "uavlab/faultlab/modes.hpp"

#include <array>
#include <utility>

namespace uavlab::faultlab {

namespace {

constexpr std::array<std::pair<FaultMode, std::string_view>, 14> kModeNames{{
    {FaultMode::GpsDeception, "gps_deception"},
    {FaultMode::GpsWeakSignal, "gps_weak_signal"},
    {FaultMode::GpsWeakerSignal, "gps_weaker_signal"},
    {FaultMode::GpsInterruption, "gps_interruption"},
    {FaultMode::ImuMultiplicative, "imu_multiplicative"},
    {FaultMode::ImuConstantDeviation, "imu_constant_deviation"},
    {FaultMode::ImuDrift, "imu_drift"},
    {FaultMode::ImuTransientDrift, "imu_transient_drift"},
    {FaultMode::ImuDisconnect, "imu_disconnect"},
    {FaultMode::ServoConstantDeviation, "servo_constant_deviation"},
    {FaultMode::ServoStuck, "servo_stuck"},
    {FaultMode::ServoLoose, "servo_loose"},
    {FaultMode::ServoDamage, "servo_damage"},
    {FaultMode::ServoJitter, "servo_jitter"},
}};

constexpr std::array<FaultMode, 14> kAll{
    FaultMode::GpsDeception,         FaultMode::GpsWeakSignal,          FaultMode::GpsWeakerSignal,
    FaultMode::GpsInterruption,      FaultMode::ImuMultiplicative,      FaultMode::ImuConstantDeviation,
    FaultMode::ImuDrift,             FaultMode::ImuTransientDrift,      FaultMode::ImuDisconnect,
    FaultMode::ServoConstantDeviation, FaultMode::ServoStuck,           FaultMode::ServoLoose,
    FaultMode::ServoDamage,          FaultMode::ServoJitter,
};

constexpr std::array<FaultMode, 13> kCampaign{
    FaultMode::GpsDeception,         FaultMode::GpsWeakSignal,     FaultMode::GpsWeakerSignal,
    FaultMode::GpsInterruption,      FaultMode::ImuMultiplicative, FaultMode::ImuConstantDeviation,
    FaultMode::ImuDrift,             FaultMode::ImuDisconnect,     FaultMode::ServoConstantDeviation,
    FaultMode::ServoStuck,           FaultMode::ServoLoose,        FaultMode::ServoDamage,
    FaultMode::ServoJitter,
};

}  // namespace

std::string_view mode_name(FaultMode mode) {
  for (const auto& [m, n] : kModeNames) {
    if (m == mode) return n;
  }
  return "unknown";
}

std::optional<FaultMode> parse_mode(std::string_view name) {
  for (const auto& [m, n] : kModeNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

std::string_view location_name(FaultLocation location) {
  switch (location) {
    case FaultLocation::None: return "none";
    case FaultLocation::Gps: return "gps";
    case FaultLocation::Imu: return "imu";
    case FaultLocation::Actuator: return "actuator";
  }
  return "unknown";
}

std::optional<FaultLocation> parse_location(std::string_view name) {
  for (auto l : {FaultLocation::None, FaultLocation::Gps, FaultLocation::Imu, FaultLocation::Actuator}) {
    if (location_name(l) == name) return l;
  }
  return std::nullopt;
}

FaultLocation location_of(FaultMode mode) {
  switch (mode) {
    case FaultMode::GpsDeception:
    case FaultMode::GpsWeakSignal:
    case FaultMode::GpsWeakerSignal:
    case FaultMode::GpsInterruption:
      return FaultLocation::Gps;
    case FaultMode::ImuMultiplicative:
    case FaultMode::ImuConstantDeviation:
    case FaultMode::ImuDrift:
    case FaultMode::ImuTransientDrift:
    case FaultMode::ImuDisconnect:
      return FaultLocation::Imu;
    default:
      return FaultLocation::Actuator;
  }
}

std::span<const FaultMode> all_fault_modes() { return kAll; }
std::span<const FaultMode> campaign_fault_modes() { return kCampaign; }

}  // namespace uavlab::faultlab
