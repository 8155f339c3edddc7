#pragma once

#include <concepts>

#include "uavlab/common/error.hpp"
#include "uavlab/flightdyn/aircraft.hpp"
#include "uavlab/flightdyn/state.hpp"

namespace uavlab::flightdyn {

/// Raised when integration produces a non-finite value. Holds the last state
/// that was still valid.
class SimulationDiverged : public Error {
 public:
  SimulationDiverged(const std::string& what, RigidBodyState last_valid)
      : Error(what), last_valid_(std::move(last_valid)) {}
  const RigidBodyState& last_valid() const noexcept { return last_valid_; }

 private:
  RigidBodyState last_valid_;
};

/// Newton-Euler rigid-body equations with a diagonal inertia tensor and
/// constant gravity along +down. `total_force`/`total_moment` exclude gravity.
StateDerivative derivatives(const RigidBodyState& state, const Vec3& total_force,
                            const Vec3& total_moment, const AircraftConfig& config);

/// Advances `state` by h * d; the attitude is not renormalised.
RigidBodyState advance(const RigidBodyState& state, const StateDerivative& d, double h);

template <typename F>
concept ForceModel = requires(F f, const RigidBodyState& s) {
  { f(s) } -> std::convertible_to<Wrench>;
};

/// One classical RK4 step of size dt. The force model is evaluated at every
/// stage; the quaternion is renormalised at the end. Throws
/// SimulationDiverged if any stage yields a non-finite value.
template <ForceModel F>
RigidBodyState integrate_step(const RigidBodyState& state, F&& forces, double dt,
                              const AircraftConfig& config) {
  if (!(dt > 0.0)) throw ConfigError("integration step must be positive");
  auto stage = [&](const RigidBodyState& s) {
    const Wrench w = forces(s);
    if (!w.force.allFinite() || !w.moment.allFinite()) {
      throw SimulationDiverged("non-finite force or moment at t=" + std::to_string(s.time), state);
    }
    return derivatives(s, w.force, w.moment, config);
  };

  const StateDerivative k1 = stage(state);
  const StateDerivative k2 = stage(advance(state, k1, 0.5 * dt));
  const StateDerivative k3 = stage(advance(state, k2, 0.5 * dt));
  const StateDerivative k4 = stage(advance(state, k3, dt));

  StateDerivative sum;
  sum.position_ned = (k1.position_ned + 2.0 * k2.position_ned + 2.0 * k3.position_ned + k4.position_ned) / 6.0;
  sum.velocity_body = (k1.velocity_body + 2.0 * k2.velocity_body + 2.0 * k3.velocity_body + k4.velocity_body) / 6.0;
  sum.attitude = (k1.attitude + 2.0 * k2.attitude + 2.0 * k3.attitude + k4.attitude) / 6.0;
  sum.angular_rates = (k1.angular_rates + 2.0 * k2.angular_rates + 2.0 * k3.angular_rates + k4.angular_rates) / 6.0;

  RigidBodyState next = advance(state, sum, dt);
  next.attitude.normalize();
  if (!next.is_finite()) {
    throw SimulationDiverged("non-finite state after step at t=" + std::to_string(state.time), state);
  }
  return next;
}

/// Force model that applies a fixed wrench regardless of state.
struct ConstantWrench {
  Wrench wrench;
  Wrench operator()(const RigidBodyState&) const { return wrench; }
};

/// Aerodynamics plus propulsion for fixed surfaces and throttle.
struct AircraftForces {
  const AircraftConfig& config;
  SurfaceActual surfaces;
  Wrench operator()(const RigidBodyState& s) const;
};

/// Mechanical energy: translational + rotational kinetic plus potential
/// relative to zero altitude.
double mechanical_energy(const RigidBodyState& s, const AircraftConfig& config);

}  // namespace uavlab::flightdyn
