#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uavlab/avionics/sensors.hpp"
#include "uavlab/common/phase.hpp"
#include "uavlab/faultlab/modes.hpp"

namespace uavlab::faultlab {

/// Gain and deviation of a faulted sensor at one instant: y_s = k*y + d.
struct SensorFaultState {
  double k = 1.0;
  double d = 0.0;
};

/// Gain and deviation of a faulted servo at one instant: u_m = k*u_c + d.
struct ActuatorFaultState {
  double k = 1.0;
  double d = 0.0;
};

inline double apply_sensor_fault(double y, const SensorFaultState& f) { return f.k * y + f.d; }
inline double apply_actuator_fault(double u_c, const ActuatorFaultState& f) { return f.k * u_c + f.d; }

/// Shape of d(t), measured from fault onset.
struct Deviation {
  enum class Shape { Constant, Ramp, Pulses };
  Shape shape = Shape::Constant;
  double value = 0.0;  // constant offset, or pulse height
  double rate = 0.0;   // ramp slope per second
  double ramp_duration = std::numeric_limits<double>::infinity();  // ramp held afterwards
  int pulse_count = 0;
  double pulse_width = 0.0;
  double pulse_interval = 0.0;

  double at(double elapsed) const;
};

/// k(t), d(t) recipe for one sensor channel.
struct ChannelProfile {
  double gain = 1.0;
  Deviation deviation;

  SensorFaultState at(double elapsed) const { return {gain, deviation.at(elapsed)}; }
  bool is_identity() const {
    return gain == 1.0 && deviation.shape == Deviation::Shape::Constant && deviation.value == 0.0;
  }
};

/// Tunable parameters of a fault. Angles in radians. Each mode reads only
/// the fields relevant to it; `default_params` fills the catalogue values.
struct FaultParams {
  double gain = 1.0;
  std::array<double, 3> bias{0.0, 0.0, 0.0};  // per IMU axis x/y/z or servo channel
  double drift_rate = 0.0;                     // rad/s
  double drift_duration = 40.0;                // s
  int pulse_count = 0;
  double pulse_height = 0.0;
  double pulse_width = 0.5;
  double pulse_interval = 5.0;
  double jitter_on = 0.2;   // s
  double jitter_off = 0.2;  // s
  double wander_sigma = 0.0;
  double wander_tau = 1.0;  // s
  double position_offset = 0.0;  // deg, added to latitude and longitude
  int satellites = 15;
  std::array<bool, 3> axes{true, true, true};  // IMU x/y/z or elevator/aileron/rudder

  friend bool operator==(const FaultParams&, const FaultParams&) = default;
};

FaultParams default_params(FaultMode mode);

/// Throws ConstraintError when the parameters break the mode's (k, d)
/// pattern, e.g. a multiplicative fault with k = 1 or a bias.
void validate_params(FaultMode mode, const FaultParams& params);

/// Per-axis profiles for the IMU. Axis x covers roll and p, y pitch and q,
/// z yaw and r.
struct ImuFaultTemplate {
  std::array<ChannelProfile, 3> attitude;
  std::array<ChannelProfile, 3> rates;
  ChannelProfile specific_force;
  bool healthy = true;
};

ImuFaultTemplate imu_fault_params(FaultMode mode, const FaultParams& params);
inline ImuFaultTemplate imu_fault_params(FaultMode mode) {
  return imu_fault_params(mode, default_params(mode));
}

/// Servo fault recipe shared by the selected channels. Stuck latches d at
/// onset, loose adds a Gauss-Markov wander, jitter applies `gain` only in
/// the on part of each period.
struct ServoFaultTemplate {
  FaultMode mode = FaultMode::ServoConstantDeviation;
  double gain = 1.0;
  std::array<double, 3> bias{0.0, 0.0, 0.0};
  bool latch_at_onset = false;
  double wander_sigma = 0.0;
  double wander_tau = 1.0;
  double jitter_on = 0.0;
  double jitter_off = 0.0;
  std::array<bool, 3> channels{true, true, true};

  bool jitter_faulted(double elapsed) const;
  /// (k, d) at `elapsed` for a channel given its latched value and wander.
  ActuatorFaultState at(int channel, double elapsed, double latched, double wander) const;
};

ServoFaultTemplate servo_fault_params(FaultMode mode, const FaultParams& params);
inline ServoFaultTemplate servo_fault_params(FaultMode mode) {
  return servo_fault_params(mode, default_params(mode));
}

/// GPS-system faults act on the whole reading.
avionics::GpsReading gps_fault_transform(const avionics::GpsReading& reading, FaultMode mode,
                                         const FaultParams& params, int validity_threshold = 8);

struct PhaseAnchor {
  Phase phase = Phase::LevelFlight;
  double offset = 0.0;  // s after the phase is entered
};

/// One scheduled fault. Either `start` is an absolute time, or `anchor`
/// places it relative to a phase entry and `start` stays empty until the
/// run resolves it.
struct FaultSpec {
  FaultMode mode = FaultMode::GpsDeception;
  FaultParams params;
  std::optional<double> start;
  double duration = std::numeric_limits<double>::infinity();
  std::optional<PhaseAnchor> anchor;

  /// Channels the fault touches, used for overlap checks.
  std::vector<std::string> channels() const;
  std::string label() const { return std::string(mode_name(mode)); }
  bool active_at(double t) const { return start && *start <= t && t < *start + duration; }
  std::string describe() const;
};

void validate(const FaultSpec& spec);

}  // namespace uavlab::faultlab
