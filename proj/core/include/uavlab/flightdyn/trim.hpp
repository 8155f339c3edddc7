#pragma once

#include "uavlab/common/error.hpp"
#include "uavlab/common/signals.hpp"
#include "uavlab/flightdyn/aircraft.hpp"
#include "uavlab/flightdyn/state.hpp"

namespace uavlab::flightdyn {

class TrimError : public Error {
 public:
  TrimError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct TrimResult {
  RigidBodyState state;
  ControlCommand command;
  double alpha = 0.0;
  double residual = 0.0;
};

struct TrimOptions {
  double heading = 0.0;  // rad
  int max_iterations = 60;
  double tolerance = 1e-10;
};

/// Residual vector of a candidate trim: (u', v', w', p', q', r', down'),
/// the derivatives that must vanish in straight-and-level flight.
Eigen::Matrix<double, 7, 1> trim_residual(const RigidBodyState& state, const SurfaceActual& controls,
                                          const AircraftConfig& config);

/// Straight-and-level trim at the given altitude/airspeed, solved by damped
/// Newton iteration over (alpha, elevator, throttle). Throws TrimError when
/// the airspeed is outside the table envelope or the solve fails.
TrimResult trim(const AircraftConfig& config, double altitude, double airspeed,
                const TrimOptions& options = {});

}  // namespace uavlab::flightdyn
