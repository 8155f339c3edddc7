#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uavlab/campaign/telemetry.hpp"

namespace uavlab::damage {

/// The part of a telemetry frame an outside observer receives over the
/// downlink: sensor outputs, flight phase, commands and servo feedback.
/// Truth state and fault labels are deliberately absent.
struct ObservableFrame {
  double t = 0.0;
  std::array<double, 3> attitude{};  // measured roll, pitch, yaw (rad)
  std::array<double, 3> rates{};     // measured p, q, r (rad/s)
  std::array<double, 3> accel{};     // measured specific force (m/s^2)
  bool imu_healthy = true;

  bool gps_received = false;
  double latitude = 0.0;  // deg
  double longitude = 0.0;
  double gps_altitude = 0.0;
  double gps_speed = 0.0;
  int satellites = 0;
  bool gps_fix = false;

  double airspeed = 0.0;
  Phase phase = Phase::LevelFlight;
  std::array<double, 3> command{};  // elevator, aileron, rudder (rad)
  std::array<double, 3> actual{};
  double throttle_command = 0.0;
  double throttle_actual = 0.0;
};

ObservableFrame observe(const campaign::TelemetryFrame& frame);
std::vector<ObservableFrame> observe(std::span<const campaign::TelemetryFrame> frames);

struct ChannelStats {
  double mean = 0.0;
  double std = 0.0;
  double range = 0.0;
};

/// Strongest spectral line of a detrended signal.
struct Oscillation {
  double frequency = 0.0;  // Hz
  double amplitude = 0.0;  // signal units
  double score = 0.0;      // frequency * amplitude
};

/// Largest non-DC line of `x` sampled at `sample_rate` after removing a
/// least-squares line. Returns zeros for fewer than four samples.
Oscillation dominant_oscillation(std::span<const double> x, double sample_rate);

struct SurfaceFeatures {
  double residual_mean = 0.0;  // actual - command, deg
  double residual_std = 0.0;
  double actual_std = 0.0;
  double command_std = 0.0;
  double gain = 1.0;  // least-squares actual/command slope through the origin
};

/// Statistics of one analysis window. Angles in degrees.
struct FeatureVector {
  double t_start = 0.0;
  double t_end = 0.0;
  Phase phase = Phase::LevelFlight;  // phase at the end of the window

  std::array<ChannelStats, 3> attitude;  // roll, pitch, yaw (yaw unwrapped)
  std::array<ChannelStats, 3> rates;     // deg/s
  std::array<Oscillation, 3> oscillation;
  double pitch_burr = 0.0;  // RMS second-difference residual of pitch

  double throttle_mean = 0.0;
  double throttle_min = 0.0;
  bool throttle_drop = false;

  double airspeed_mean = 0.0;
  double airspeed_trend = 0.0;  // m/s^2
  double altitude_rate = 0.0;   // m/s from GPS altitude, 0 without fixes
  double position_jump = 0.0;   // m, displacement between epochs beyond speed * dt
  double heading_residual = 0.0;  // measured yaw minus GPS track
  double bank_residual = 0.0;     // measured roll minus the bank implied by the track turn rate

  double gps_received_fraction = 0.0;
  double gps_fix_fraction = 0.0;
  double gps_satellites_min = 0.0;
  double imu_healthy_fraction = 0.0;
  double imu_zero_fraction = 0.0;  // frames whose IMU outputs are all exactly zero

  std::array<SurfaceFeatures, 3> surfaces;
  bool command_frozen = false;  // every surface command constant over the window
  bool surface_stuck = false;   // every surface frozen while the commands move
};

struct FeatureConfig {
  double window = 5.0;  // s
  double stride = 2.5;  // s
  double throttle_drop_threshold = 0.3;
  double throttle_idle = 0.05;
};

/// Sliding-window features. Throws AnalysisError when the record is shorter
/// than two windows or the configuration is invalid.
std::vector<FeatureVector> extract_features(std::span<const ObservableFrame> frames, const FeatureConfig& config = {});

/// Names usable in rule predicates, in a fixed order.
const std::vector<std::string>& feature_names();
/// Value of a named feature (booleans as 0/1); nullopt for unknown names.
std::optional<double> feature_value(const FeatureVector& f, std::string_view name);

}  // namespace uavlab::damage
