#pragma once

#include <optional>

#include "uavlab/avionics/sensors.hpp"

namespace uavlab::avionics {

enum class NavSource { Gps, DeadReckoning };

/// Position/velocity/attitude estimate the autopilot flies on. Local NED
/// about the scenario origin.
struct NavSolution {
  double time = 0.0;
  Vec3 position_ned = Vec3::Zero();
  Vec3 velocity_ned = Vec3::Zero();
  EulerAngles attitude;
  Vec3 rates = Vec3::Zero();
  double airspeed = 0.0;
  NavSource source = NavSource::Gps;

  double altitude() const { return -position_ned.z(); }
  double climb_rate() const { return -velocity_ned.z(); }
};

/// Builds the solution that exactly matches a truth state.
NavSolution nav_from_truth(const RigidBodyState& truth);

/// Strapdown propagation on IMU data alone: attitude and rates taken from
/// the reading, specific force rotated to NED plus gravity integrated twice.
/// Error grows without bound; the result is tagged DeadReckoning.
NavSolution dead_reckon(const NavSolution& previous, const ImuReading& imu, double dt);

/// The flight computer's navigation: IMU propagation between GPS epochs,
/// position reset to each usable fix, velocity blended toward the
/// fix-to-fix difference.
class NavFilter {
 public:
  NavFilter(GeoOrigin origin, NavSolution initial) : origin_(origin), solution_(initial) {}

  const NavSolution& update(const ImuReading& imu, const std::optional<GpsReading>& gps,
                            bool gps_usable, const AirDataReading& air, double dt);
  const NavSolution& solution() const { return solution_; }

 private:
  GeoOrigin origin_;
  NavSolution solution_;
  std::optional<std::pair<double, Vec3>> last_fix_;
  double velocity_blend_ = 0.1;
  double max_plausible_speed_ = 150.0;
};

struct GpsIntegrityConfig {
  int validity_threshold = 8;
  double jump_threshold = 1000.0;   // m between consecutive epochs
  double deception_latency = 1.0;   // s until the ground station declares the fix invalid
};

/// Decides whether the GPS fix may be used: invalid while no reading arrives
/// at an epoch or the receiver reports too few satellites, and permanently
/// invalid once a position jump has been confirmed after the latency.
class GpsIntegrityMonitor {
 public:
  explicit GpsIntegrityMonitor(GeoOrigin origin, GpsIntegrityConfig config = {})
      : origin_(origin), config_(config) {}

  bool update(bool epoch, const std::optional<GpsReading>& reading, double t);
  bool valid() const { return valid_; }
  std::optional<double> jump_detected_at() const { return jump_at_; }

 private:
  GeoOrigin origin_;
  GpsIntegrityConfig config_;
  bool valid_ = true;
  bool receiver_ok_ = true;
  bool deception_latched_ = false;
  std::optional<double> jump_at_;
  std::optional<std::pair<double, double>> last_fix_ne_;
};

struct ImuMonitorConfig {
  double residual_threshold = deg2rad(6.0);
  double leak_time_constant = 60.0;  // s
};

/// Flags the IMU unhealthy when it reports itself failed, or when roll/pitch
/// drift away from the integral of the measured body rates.
class ImuHealthMonitor {
 public:
  explicit ImuHealthMonitor(ImuMonitorConfig config = {}) : config_(config) {}

  bool update(const ImuReading& imu, double dt);
  bool healthy() const { return healthy_; }
  double roll_residual() const { return residual_roll_; }
  double pitch_residual() const { return residual_pitch_; }

 private:
  ImuMonitorConfig config_;
  bool healthy_ = true;
  std::optional<ImuReading> previous_;
  double residual_roll_ = 0.0;
  double residual_pitch_ = 0.0;
};

/// Euler-angle rates implied by body rates at the given attitude.
Vec3 euler_rates(const EulerAngles& attitude, const Vec3& body_rates);

}  // namespace uavlab::avionics
