#include "uavlab/autopilot/controller.hpp"

#include <algorithm>
#include <cmath>

namespace uavlab::autopilot {

namespace {

struct Vec2Like {
  double n = 0.0;
  double e = 0.0;
};

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

double course_of(const NavSolution& nav) {
  const double vn = nav.velocity_ned.x();
  const double ve = nav.velocity_ned.y();
  if (std::hypot(vn, ve) > 5.0) return std::atan2(ve, vn);
  return nav.attitude.yaw;
}

}  // namespace

ControlCommand sanitize(const ControlCommand& c, const ControlCommand& fallback, double limit) {
  ControlCommand out;
  out.elevator = std::clamp(finite_or(c.elevator, fallback.elevator), -limit, limit);
  out.aileron = std::clamp(finite_or(c.aileron, fallback.aileron), -limit, limit);
  out.rudder = std::clamp(finite_or(c.rudder, fallback.rudder), -limit, limit);
  out.throttle = std::clamp(finite_or(c.throttle, fallback.throttle), 0.0, 1.0);
  return out;
}

// Conditional integration: the integrator only moves when the loop output is
// not saturated in the direction the error pushes it.
void Autopilot::Integrator::step(double error, double gain, double dt, double output, double lo, double hi) {
  if (!std::isfinite(error)) return;
  const double delta = gain * error * dt;
  if ((output >= hi && delta > 0.0) || (output <= lo && delta < 0.0)) return;
  value += delta;
}

Autopilot::Autopilot(AutopilotGains gains, TrimPoint trim, FailsafeConfig failsafe)
    : gains_(gains), trim_(trim), failsafe_(failsafe), last_command_(trim.command) {}

double Autopilot::elevator_for_pitch(double pitch_target, const NavSolution& nav, double dt) {
  const double lim = gains_.surface_limit;
  const double error = pitch_target - nav.attitude.pitch;
  const double raw = trim_.command.elevator - gains_.pitch_kp * error - pitch_i_.value +
                     gains_.pitch_rate_kd * nav.rates.y();
  // The integrator term enters with a minus sign, so saturation is mirrored.
  pitch_i_.step(error, gains_.pitch_ki, dt, -raw, -lim, lim);
  return raw;
}

double Autopilot::aileron_for_roll(double roll_target, const NavSolution& nav, double dt) {
  const double lim = gains_.surface_limit;
  const double error = roll_target - nav.attitude.roll;
  const double raw = trim_.command.aileron + gains_.roll_kp * error + roll_i_.value -
                     gains_.roll_rate_kd * nav.rates.x();
  roll_i_.step(error, gains_.roll_ki, dt, raw, -lim, lim);
  return raw;
}

double Autopilot::rudder_damper(const NavSolution& nav, double dt) {
  // High-pass filtered yaw rate so steady turns are not opposed.
  const double r = nav.rates.z();
  const double a = std::exp(-dt / gains_.washout_tau);
  washout_state_ = a * washout_state_ + (1.0 - a) * r;
  return trim_.command.rudder + gains_.yaw_damper * (r - washout_state_);
}

AutopilotOutput Autopilot::nominal(const NavSolution& nav, const MissionPlan& plan, const FlightPhase& phase,
                                   double dt) {
  AutopilotOutput out;
  const double t = nav.time;

  // Vertical reference per phase.
  double altitude_target = plan.cruise_altitude;
  double path_angle = 0.0;
  if (phase.phase == Phase::GlideSlope || phase.phase == Phase::Attack) {
    if (!phase_reference_altitude_ || reference_phase_ != phase.phase) {
      phase_reference_altitude_ = nav.altitude();
      reference_phase_ = phase.phase;
    }
    path_angle = phase.phase == Phase::GlideSlope ? -plan.glide_path_angle : -plan.attack_path_angle;
    altitude_target = std::max(
        0.0, *phase_reference_altitude_ + plan.cruise_speed * std::sin(path_angle) * (t - phase.entered_at));
  }
  if (altitude_override_) altitude_target = *altitude_override_;
  const double climb_rate_target = altitude_override_ ? 0.0 : plan.cruise_speed * std::sin(path_angle);

  const double h_err = altitude_target - nav.altitude();
  double pitch_target = trim_.pitch + path_angle + gains_.altitude_kp * h_err + altitude_i_.value +
                        gains_.climb_rate_kd * (climb_rate_target - nav.climb_rate());
  const double pitch_lo = trim_.pitch + gains_.min_pitch;
  const double pitch_hi = trim_.pitch + gains_.max_pitch;
  altitude_i_.step(h_err, gains_.altitude_ki, dt, pitch_target, pitch_lo, pitch_hi);
  pitch_target = std::clamp(finite_or(pitch_target, trim_.pitch), pitch_lo, pitch_hi);

  // Speed.
  const double v_err = plan.cruise_speed - nav.airspeed;
  const double thr_raw = trim_.command.throttle + gains_.speed_kp * v_err + speed_i_.value;
  speed_i_.step(v_err, gains_.speed_ki, dt, thr_raw, 0.0, 1.0);

  // Lateral guidance along the active leg.
  const auto& wps = plan.waypoints;
  const Vec2Like from = leg_ == 0 ? Vec2Like{0.0, 0.0} : Vec2Like{wps[leg_ - 1].north, wps[leg_ - 1].east};
  const Vec2Like to{wps[leg_].north, wps[leg_].east};
  const double leg_n = to.n - from.n;
  const double leg_e = to.e - from.e;
  const double leg_len = std::hypot(leg_n, leg_e);
  const double rel_n = nav.position_ned.x() - from.n;
  const double rel_e = nav.position_ned.y() - from.e;
  double leg_course = std::atan2(leg_e, leg_n);
  double cross_track = 0.0;
  if (leg_len > 0.0) {
    cross_track = (leg_n * rel_e - leg_e * rel_n) / leg_len;
    const double along = (leg_n * rel_n + leg_e * rel_e) / leg_len;
    const double to_go = std::hypot(to.n - nav.position_ned.x(), to.e - nav.position_ned.y());
    if ((to_go < plan.waypoint_radius || along > leg_len) && leg_ + 1 < wps.size()) ++leg_;
  }
  const double course_target =
      leg_course - gains_.max_intercept * (2.0 / kPi) * std::atan(gains_.cross_track_gain * cross_track);
  const double course_err = wrap_pi(course_target - course_of(nav));
  const double roll_target =
      std::clamp(finite_or(gains_.course_kp * course_err, 0.0), -gains_.max_roll, gains_.max_roll);

  out.command.elevator = elevator_for_pitch(pitch_target, nav, dt);
  out.command.aileron = aileron_for_roll(roll_target, nav, dt);
  out.command.rudder = rudder_damper(nav, dt);
  out.command.throttle = thr_raw;
  out.pitch_target = pitch_target;
  out.roll_target = roll_target;
  out.altitude_target = altitude_target;
  out.course_target = course_target;
  return out;
}

AutopilotOutput Autopilot::update(const NavSolution& nav, const MissionPlan& plan, const FlightPhase& phase,
                                  const FailsafeMode& failsafe, double dt) {
  AutopilotOutput out;
  switch (failsafe.kind) {
    case FailsafeKind::Nominal:
    case FailsafeKind::ImuPositioning:
      out = nominal(nav, plan, phase, dt);
      hold_course_.reset();
      break;
    case FailsafeKind::LevelFlightFallback: {
      if (!hold_course_) hold_course_ = nav.attitude.yaw;
      const double heading_err = wrap_pi(*hold_course_ - nav.attitude.yaw);
      out.roll_target = std::clamp(gains_.course_kp * heading_err, -gains_.max_roll, gains_.max_roll);
      out.pitch_target = failsafe_.fallback_pitch;
      out.course_target = *hold_course_;
      out.altitude_target = nav.altitude();
      out.command.elevator = elevator_for_pitch(out.pitch_target, nav, dt);
      out.command.aileron = aileron_for_roll(out.roll_target, nav, dt);
      out.command.rudder = rudder_damper(nav, dt);
      out.command.throttle = 0.0;
      break;
    }
    case FailsafeKind::HoldLastRudder: {
      if (!frozen_) {
        frozen_ = last_command_;
        if (failsafe_.hold_zero_throttle) frozen_->throttle = 0.0;
      }
      out.command = *frozen_;
      return out;
    }
  }
  out.command = sanitize(out.command, last_command_, gains_.surface_limit);
  last_command_ = out.command;
  return out;
}

}  // namespace uavlab::autopilot
