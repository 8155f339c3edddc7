#include "uavlab/avionics/navigation.hpp"

#include <cmath>

#include "uavlab/common/units.hpp"

namespace uavlab::avionics {

NavSolution nav_from_truth(const RigidBodyState& truth) {
  NavSolution n;
  n.time = truth.time;
  n.position_ned = truth.position_ned;
  n.velocity_ned = truth.velocity_ned();
  n.attitude = truth.euler();
  n.rates = truth.angular_rates;
  n.airspeed = truth.airspeed();
  n.source = NavSource::Gps;
  return n;
}

NavSolution dead_reckon(const NavSolution& previous, const ImuReading& imu, double dt) {
  NavSolution n = previous;
  n.time = previous.time + dt;
  n.source = NavSource::DeadReckoning;
  if (!imu.healthy) {
    n.position_ned += previous.velocity_ned * dt;
    return n;
  }
  n.attitude = imu.attitude;
  n.rates = imu.rates;
  const flightdyn::Quat q = flightdyn::quaternion_from_euler(imu.attitude);
  const Vec3 accel = q * imu.specific_force + Vec3(0.0, 0.0, kGravity);
  n.position_ned += previous.velocity_ned * dt + 0.5 * accel * dt * dt;
  n.velocity_ned += accel * dt;
  return n;
}

const NavSolution& NavFilter::update(const ImuReading& imu, const std::optional<GpsReading>& gps,
                                     bool gps_usable, const AirDataReading& air, double dt) {
  const NavSource previous_source = solution_.source;
  solution_ = dead_reckon(solution_, imu, dt);
  solution_.airspeed = air.airspeed;
  solution_.source = gps_usable ? previous_source : NavSource::DeadReckoning;

  if (gps && gps->received && gps_usable && gps->fix_valid) {
    const auto [north, east] = geodetic_to_ned(gps->latitude, gps->longitude, origin_);
    const Vec3 pos(north, east, -gps->altitude);
    if (last_fix_) {
      const double span = gps->time - last_fix_->first;
      if (span > 0.0) {
        const Vec3 v_fix = (pos - last_fix_->second) / span;
        if (v_fix.norm() < max_plausible_speed_) {
          solution_.velocity_ned += velocity_blend_ * (v_fix - solution_.velocity_ned);
        }
      }
    }
    last_fix_ = std::make_pair(gps->time, pos);
    solution_.position_ned = pos;
    solution_.source = NavSource::Gps;
  }
  if (!gps_usable) last_fix_.reset();
  return solution_;
}

bool GpsIntegrityMonitor::update(bool epoch, const std::optional<GpsReading>& reading, double t) {
  if (epoch) {
    if (!reading || !reading->received) {
      receiver_ok_ = false;
      last_fix_ne_.reset();
    } else {
      receiver_ok_ = reading->fix_valid && reading->satellites >= config_.validity_threshold;
      const auto ne = geodetic_to_ned(reading->latitude, reading->longitude, origin_);
      if (last_fix_ne_ && !jump_at_) {
        const double jump = std::hypot(ne.first - last_fix_ne_->first, ne.second - last_fix_ne_->second);
        if (jump > config_.jump_threshold) jump_at_ = t;
      }
      last_fix_ne_ = ne;
    }
  }
  if (jump_at_ && t >= *jump_at_ + config_.deception_latency - 1e-9) deception_latched_ = true;
  valid_ = receiver_ok_ && !deception_latched_;
  return valid_;
}

Vec3 euler_rates(const EulerAngles& a, const Vec3& w) {
  const double sr = std::sin(a.roll), cr = std::cos(a.roll);
  const double tp = std::tan(a.pitch), cp = std::cos(a.pitch);
  return {w.x() + tp * (w.y() * sr + w.z() * cr), w.y() * cr - w.z() * sr,
          (w.y() * sr + w.z() * cr) / cp};
}

bool ImuHealthMonitor::update(const ImuReading& imu, double dt) {
  if (!healthy_) return false;
  if (!imu.healthy) {
    healthy_ = false;
    return false;
  }
  if (previous_) {
    const Vec3 rate_prev = euler_rates(previous_->attitude, previous_->rates);
    const Vec3 rate_now = euler_rates(imu.attitude, imu.rates);
    const Vec3 predicted = 0.5 * (rate_prev + rate_now) * dt;
    const double leak = std::exp(-dt / config_.leak_time_constant);
    residual_roll_ =
        leak * (residual_roll_ + wrap_pi(imu.attitude.roll - previous_->attitude.roll) - predicted.x());
    residual_pitch_ =
        leak * (residual_pitch_ + (imu.attitude.pitch - previous_->attitude.pitch) - predicted.y());
    if (std::abs(residual_roll_) > config_.residual_threshold ||
        std::abs(residual_pitch_) > config_.residual_threshold) {
      healthy_ = false;
    }
  }
  previous_ = imu;
  return healthy_;
}

}  // namespace uavlab::avionics
