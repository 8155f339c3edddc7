#pragma once

#include <cstddef>
#include <optional>

#include "uavlab/autopilot/failsafe.hpp"
#include "uavlab/autopilot/mission.hpp"
#include "uavlab/common/signals.hpp"

namespace uavlab::autopilot {

/// Gains of the cascaded loops. Angles in radians, distances in metres.
struct AutopilotGains {
  // altitude -> pitch target
  double altitude_kp = 0.010;
  double altitude_ki = 0.0011;
  double climb_rate_kd = 0.030;
  double max_pitch = deg2rad(15.0);
  double min_pitch = deg2rad(-25.0);
  // pitch -> elevator
  double pitch_kp = 1.5;
  double pitch_ki = 0.4;
  double pitch_rate_kd = 0.25;
  // airspeed -> throttle
  double speed_kp = 0.08;
  double speed_ki = 0.02;
  // course / cross-track -> roll target
  double course_kp = 1.2;
  double cross_track_gain = 0.01;  // 1/m
  double max_intercept = deg2rad(60.0);
  double max_roll = deg2rad(30.0);
  // roll -> aileron
  double roll_kp = 1.0;
  double roll_ki = 0.1;
  double roll_rate_kd = 0.15;
  // yaw damper
  double yaw_damper = 0.3;
  double washout_tau = 1.0;  // s

  double surface_limit = deg2rad(25.0);
};

struct TrimPoint {
  ControlCommand command;
  double pitch = 0.0;  // trim pitch attitude
};

/// Targets produced alongside the command, for logging and tests.
struct AutopilotOutput {
  ControlCommand command;
  double pitch_target = 0.0;
  double roll_target = 0.0;
  double altitude_target = 0.0;
  double course_target = 0.0;
};

/// Cascaded PID autopilot with failsafe handling. One instance per run.
class Autopilot {
 public:
  Autopilot(AutopilotGains gains, TrimPoint trim, FailsafeConfig failsafe = {});

  AutopilotOutput update(const NavSolution& nav, const MissionPlan& plan, const FlightPhase& phase,
                         const FailsafeMode& failsafe, double dt);

  /// Overrides the mission altitude (used by step-response experiments).
  void set_altitude_override(std::optional<double> altitude) { altitude_override_ = altitude; }
  std::size_t active_leg() const { return leg_; }
  const AutopilotGains& gains() const { return gains_; }

 private:
  struct Integrator {
    double value = 0.0;
    void step(double error, double gain, double dt, double output, double lo, double hi);
  };

  AutopilotOutput nominal(const NavSolution& nav, const MissionPlan& plan, const FlightPhase& phase, double dt);
  double elevator_for_pitch(double pitch_target, const NavSolution& nav, double dt);
  double aileron_for_roll(double roll_target, const NavSolution& nav, double dt);
  double rudder_damper(const NavSolution& nav, double dt);

  AutopilotGains gains_;
  TrimPoint trim_;
  FailsafeConfig failsafe_;
  Integrator altitude_i_, pitch_i_, speed_i_, roll_i_;
  double washout_state_ = 0.0;
  std::size_t leg_ = 0;
  std::optional<double> altitude_override_;
  std::optional<double> phase_reference_altitude_;
  Phase reference_phase_ = Phase::Climb;
  std::optional<double> hold_course_;
  std::optional<ControlCommand> frozen_;
  ControlCommand last_command_;
};

/// Replaces non-finite values by the fallback and clamps to limits.
ControlCommand sanitize(const ControlCommand& command, const ControlCommand& fallback, double surface_limit);

}  // namespace uavlab::autopilot
