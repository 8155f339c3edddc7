#include "uavlab/flightdyn/state.hpp"

#include <algorithm>
#include <cmath>

namespace uavlab::flightdyn {

Quat quaternion_from_euler(const EulerAngles& e) {
  return Quat(Eigen::AngleAxisd(e.yaw, Vec3::UnitZ()) *
              Eigen::AngleAxisd(e.pitch, Vec3::UnitY()) *
              Eigen::AngleAxisd(e.roll, Vec3::UnitX()));
}

EulerAngles euler_from_quaternion(const Quat& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  EulerAngles e;
  e.roll = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
  e.pitch = std::asin(std::clamp(2.0 * (w * y - z * x), -1.0, 1.0));
  e.yaw = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
  return e;
}

bool RigidBodyState::is_finite() const {
  return std::isfinite(time) && position_ned.allFinite() && velocity_body.allFinite() &&
         attitude.coeffs().allFinite() && angular_rates.allFinite();
}

}  // namespace uavlab::flightdyn
