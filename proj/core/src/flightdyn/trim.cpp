#include "uavlab/flightdyn/trim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "uavlab/flightdyn/atmosphere.hpp"
#include "uavlab/flightdyn/dynamics.hpp"

namespace uavlab::flightdyn {
namespace {

constexpr double kMaxSurface = 0.4363323129985824;  // 25 deg

struct Candidate {
  RigidBodyState state;
  SurfaceActual controls;
};

Candidate make_candidate(const Eigen::Vector3d& x, double altitude, double airspeed, double heading) {
  Candidate c;
  const double alpha = x[0];
  c.state.position_ned = Vec3(0.0, 0.0, -altitude);
  c.state.velocity_body = Vec3(airspeed * std::cos(alpha), 0.0, airspeed * std::sin(alpha));
  c.state.attitude = quaternion_from_euler({0.0, alpha, heading});
  c.controls.elevator = x[1];
  c.controls.throttle = x[2];
  return c;
}

}  // namespace

Eigen::Matrix<double, 7, 1> trim_residual(const RigidBodyState& state, const SurfaceActual& controls,
                                          const AircraftConfig& config) {
  const Wrench w = AircraftForces{config, controls}(state);
  const StateDerivative d = derivatives(state, w.force, w.moment, config);
  Eigen::Matrix<double, 7, 1> r;
  r << d.velocity_body, d.angular_rates, d.position_ned.z();
  return r;
}

TrimResult trim(const AircraftConfig& config, double altitude, double airspeed,
                const TrimOptions& options) {
  config.validate();
  standard_atmosphere(altitude);
  const double v_max = config.thrust_table.max_airspeed();
  if (!(airspeed > 0.0 && airspeed <= v_max)) {
    throw TrimError("airspeed " + std::to_string(airspeed) + " m/s outside the table envelope (0, " +
                        std::to_string(v_max) + "]",
                    std::numeric_limits<double>::infinity());
  }

  // Unknowns (alpha, elevator, throttle); equations (u', w', q').
  // Throttle beyond [0, 1] is extended linearly so the iteration stays smooth;
  // such solutions are rejected afterwards.
  const double full_thrust = config.thrust_table.thrust(1.0, airspeed, altitude);
  auto residual3 = [&](const Eigen::Vector3d& x) {
    Candidate c = make_candidate(x, altitude, airspeed, options.heading);
    const double excess = c.controls.throttle - std::clamp(c.controls.throttle, 0.0, 1.0);
    c.controls.throttle -= excess;
    Wrench w = AircraftForces{config, c.controls}(c.state);
    w.force.x() += excess * full_thrust;
    const StateDerivative d = derivatives(c.state, w.force, w.moment, config);
    return Eigen::Vector3d(d.velocity_body.x(), d.velocity_body.z(), d.angular_rates.y());
  };

  const double rho = standard_atmosphere(altitude).density;
  const double cl_needed =
      config.mass * 9.81 / (0.5 * rho * airspeed * airspeed * config.wing_area);
  Eigen::Vector3d x(std::clamp((cl_needed - 0.1) / 5.0, -0.2, 0.3), 0.0, 0.5);

  Eigen::Vector3d r = residual3(x);
  for (int it = 0; it < options.max_iterations && r.norm() > options.tolerance; ++it) {
    Eigen::Matrix3d jac;
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
      Eigen::Vector3d xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      jac.col(j) = (residual3(xp) - residual3(xm)) / (2.0 * h);
    }
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    Eigen::Vector3d x_next = x + step;
    Eigen::Vector3d r_next = residual3(x_next);
    while (r_next.norm() >= r.norm() && lambda > 1e-4) {
      lambda *= 0.5;
      x_next = x + lambda * step;
      r_next = residual3(x_next);
    }
    x = x_next;
    r = r_next;
  }

  if (x[2] < 0.0 || x[2] > 1.0 || !x.allFinite()) {
    throw TrimError("trim requires throttle " + std::to_string(x[2]) + " outside [0, 1] at " +
                        std::to_string(airspeed) + " m/s",
                    r.norm());
  }
  const Candidate c = make_candidate(x, altitude, airspeed, options.heading);
  const double full_residual = trim_residual(c.state, c.controls, config).norm();
  if (!(full_residual < 1e-6) || x[2] < 0.0 || x[2] > 1.0 || std::abs(x[1]) > kMaxSurface ||
      std::abs(x[0]) > 0.35) {
    throw TrimError("trim did not converge at " + std::to_string(altitude) + " m, " +
                        std::to_string(airspeed) + " m/s (residual " +
                        std::to_string(full_residual) + ", throttle " + std::to_string(x[2]) + ")",
                    full_residual);
  }

  TrimResult out;
  out.state = c.state;
  out.command = ControlCommand{x[1], 0.0, 0.0, x[2]};
  out.alpha = x[0];
  out.residual = full_residual;
  return out;
}

}  // namespace uavlab::flightdyn
