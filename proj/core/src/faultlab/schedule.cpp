#include "uavlab/faultlab/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "uavlab/common/error.hpp"

namespace uavlab::faultlab {

namespace {

bool share_channel(const FaultSpec& a, const FaultSpec& b) {
  const auto ca = a.channels();
  const auto cb = b.channels();
  return std::any_of(ca.begin(), ca.end(),
                     [&](const std::string& c) { return std::find(cb.begin(), cb.end(), c) != cb.end(); });
}

bool intervals_overlap(double s1, double d1, double s2, double d2) {
  return s1 < s2 + d2 && s2 < s1 + d1;
}

void check_pair(const FaultSpec& a, const FaultSpec& b) {
  if (!share_channel(a, b)) return;
  const std::string both = a.describe() + " and " + b.describe();
  if (a.anchor.has_value() != b.anchor.has_value()) {
    throw ConstraintError("faults on the same channel mix absolute and phase-relative timing: " + both);
  }
  if (a.anchor) {
    if (a.anchor->phase != b.anchor->phase) {
      throw ConstraintError("faults on the same channel anchored to different phases: " + both);
    }
    if (intervals_overlap(a.anchor->offset, a.duration, b.anchor->offset, b.duration)) {
      throw ConstraintError("overlapping faults on the same channel: " + both);
    }
  } else if (intervals_overlap(*a.start, a.duration, *b.start, b.duration)) {
    throw ConstraintError("overlapping faults on the same channel: " + both);
  }
}

}  // namespace

FaultSchedule::FaultSchedule(std::vector<FaultSpec> specs) : specs_(std::move(specs)) {
  for (auto& s : specs_) {
    if (s.anchor) s.start.reset();
    validate(s);
  }
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    for (std::size_t j = i + 1; j < specs_.size(); ++j) check_pair(specs_[i], specs_[j]);
  }
}

void FaultSchedule::resolve_phase_entry(Phase phase, double t) {
  for (auto& s : specs_) {
    if (s.anchor && s.anchor->phase == phase && !s.start) s.start = t + s.anchor->offset;
  }
}

std::vector<std::size_t> schedule_active(const FaultSchedule& schedule, double t) {
  std::vector<std::size_t> out;
  const auto& specs = schedule.specs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].active_at(t)) out.push_back(i);
  }
  return out;
}

FaultInjector::FaultInjector(FaultSchedule schedule, std::uint64_t seed, int gps_validity_threshold)
    : schedule_(std::move(schedule)),
      latches_(schedule_.size()),
      gps_validity_threshold_(gps_validity_threshold) {
  for (const auto& s : schedule_.specs()) {
    const FaultLocation loc = location_of(s.mode);
    imu_.push_back(loc == FaultLocation::Imu ? imu_fault_params(s.mode, s.params) : ImuFaultTemplate{});
    servo_.push_back(loc == FaultLocation::Actuator ? servo_fault_params(s.mode, s.params)
                                                    : ServoFaultTemplate{});
    if (servo_.back().wander_sigma > 0.0 && !wander_rng_) {
      wander_rng_ = avionics::make_stream(seed, avionics::StreamId::ServoWander);
    }
  }
}

void FaultInjector::update(double t, double dt, const SurfaceActual& actual) {
  active_ = schedule_active(schedule_, t);
  for (std::size_t i : active_) {
    const FaultSpec& spec = schedule_.specs()[i];
    if (location_of(spec.mode) != FaultLocation::Actuator) continue;
    Latch& latch = latches_[i];
    const ServoFaultTemplate& tpl = servo_[i];
    if (!latch.started) {
      latch.started = true;
      for (int c = 0; c < kServoChannelCount; ++c) {
        latch.held[c] = channel(actual, static_cast<ServoChannel>(c));
      }
    } else if (tpl.wander_sigma > 0.0) {
      const double a = std::exp(-dt / tpl.wander_tau);
      const double drive = tpl.wander_sigma * std::sqrt(1.0 - a * a);
      for (int c = 0; c < kServoChannelCount; ++c) {
        latch.wander[c] = a * latch.wander[c] + avionics::gaussian(*wander_rng_, drive);
      }
    }
  }
}

std::string FaultInjector::labels() const {
  std::string out;
  for (std::size_t i : active_) {
    if (!out.empty()) out += ';';
    out += schedule_.specs()[i].label();
  }
  return out;
}

avionics::ImuReading FaultInjector::apply_imu(const avionics::ImuReading& reading, double t) const {
  avionics::ImuReading r = reading;
  for (std::size_t i : active_) {
    const FaultSpec& spec = schedule_.specs()[i];
    if (location_of(spec.mode) != FaultLocation::Imu) continue;
    const ImuFaultTemplate& tpl = imu_[i];
    const double elapsed = t - *spec.start;
    double* att[3] = {&r.attitude.roll, &r.attitude.pitch, &r.attitude.yaw};
    for (int a = 0; a < 3; ++a) {
      *att[a] = apply_sensor_fault(*att[a], tpl.attitude[a].at(elapsed));
      r.rates[a] = apply_sensor_fault(r.rates[a], tpl.rates[a].at(elapsed));
      r.specific_force[a] = apply_sensor_fault(r.specific_force[a], tpl.specific_force.at(elapsed));
    }
    r.attitude.yaw = wrap_pi(r.attitude.yaw);
    r.healthy = r.healthy && tpl.healthy;
  }
  return r;
}

avionics::GpsReading FaultInjector::apply_gps(const avionics::GpsReading& reading) const {
  avionics::GpsReading r = reading;
  for (std::size_t i : active_) {
    const FaultSpec& spec = schedule_.specs()[i];
    if (location_of(spec.mode) != FaultLocation::Gps) continue;
    r = gps_fault_transform(r, spec.mode, spec.params, gps_validity_threshold_);
  }
  return r;
}

ControlCommand FaultInjector::apply_actuators(const ControlCommand& command, double t) const {
  ControlCommand out = command;
  for (std::size_t i : active_) {
    const FaultSpec& spec = schedule_.specs()[i];
    if (location_of(spec.mode) != FaultLocation::Actuator) continue;
    const Latch& latch = latches_[i];
    const ServoFaultTemplate& tpl = servo_[i];
    const double elapsed = t - *spec.start;
    for (int c = 0; c < kServoChannelCount; ++c) {
      double& u = channel(out, static_cast<ServoChannel>(c));
      u = apply_actuator_fault(u, tpl.at(c, elapsed, latch.held[c], latch.wander[c]));
    }
  }
  return out;
}

}  // namespace uavlab::faultlab
