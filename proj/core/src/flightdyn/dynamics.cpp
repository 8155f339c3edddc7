#include "uavlab/flightdyn/dynamics.hpp"

#include "uavlab/common/units.hpp"
#include "uavlab/flightdyn/aero.hpp"
#include "uavlab/flightdyn/atmosphere.hpp"
#include "uavlab/flightdyn/propulsion.hpp"

namespace uavlab::flightdyn {

StateDerivative derivatives(const RigidBodyState& state, const Vec3& total_force,
                            const Vec3& total_moment, const AircraftConfig& config) {
  StateDerivative d;
  const Quat& q = state.attitude;
  const Vec3& v = state.velocity_body;
  const Vec3& w = state.angular_rates;
  const Vec3 inertia = config.inertia.diagonal();

  const Vec3 gravity_body = q.conjugate() * Vec3(0.0, 0.0, kGravity);
  d.position_ned = q * v;
  d.velocity_body = total_force / config.mass + gravity_body - w.cross(v);

  const Vec3 h = inertia.cwiseProduct(w);
  d.angular_rates = (total_moment - w.cross(h)).cwiseQuotient(inertia);

  // qdot = 0.5 * q (x) (0, w)
  const Quat omega(0.0, w.x(), w.y(), w.z());
  const Quat qdot = q * omega;
  d.attitude = 0.5 * Eigen::Vector4d(qdot.w(), qdot.x(), qdot.y(), qdot.z());
  return d;
}

RigidBodyState advance(const RigidBodyState& state, const StateDerivative& d, double h) {
  RigidBodyState s = state;
  s.time = state.time + h;
  s.position_ned += h * d.position_ned;
  s.velocity_body += h * d.velocity_body;
  s.angular_rates += h * d.angular_rates;
  s.attitude = Quat(state.attitude.w() + h * d.attitude[0], state.attitude.x() + h * d.attitude[1],
                    state.attitude.y() + h * d.attitude[2], state.attitude.z() + h * d.attitude[3]);
  return s;
}

Wrench AircraftForces::operator()(const RigidBodyState& s) const {
  const AirData air = air_data(s);
  Wrench w = aero_force_moment(s, surfaces, air, config);
  w.force += propulsion_thrust(surfaces.throttle, air.airspeed, s.altitude(), config);
  return w;
}

double mechanical_energy(const RigidBodyState& s, const AircraftConfig& config) {
  const double translational = 0.5 * config.mass * s.velocity_body.squaredNorm();
  const double rotational =
      0.5 * s.angular_rates.dot(config.inertia.diagonal().cwiseProduct(s.angular_rates));
  return translational + rotational + config.mass * kGravity * s.altitude();
}

}  // namespace uavlab::flightdyn
