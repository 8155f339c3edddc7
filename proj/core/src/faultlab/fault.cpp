#include "uavlab/faultlab/fault.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uavlab/common/error.hpp"
#include "uavlab/common/units.hpp"

namespace uavlab::faultlab {

double Deviation::at(double elapsed) const {
  switch (shape) {
    case Shape::Constant:
      return value;
    case Shape::Ramp:
      return rate * std::clamp(elapsed, 0.0, ramp_duration);
    case Shape::Pulses:
      for (int i = 0; i < pulse_count; ++i) {
        const double s = i * pulse_interval;
        if (elapsed >= s && elapsed < s + pulse_width) return value;
      }
      return 0.0;
  }
  return 0.0;
}

FaultParams default_params(FaultMode mode) {
  FaultParams p;
  switch (mode) {
    case FaultMode::GpsDeception:
      p.position_offset = 0.05;
      break;
    case FaultMode::GpsWeakSignal:
      p.satellites = 12;
      break;
    case FaultMode::GpsWeakerSignal:
      p.satellites = 7;
      break;
    case FaultMode::GpsInterruption:
      p.satellites = 0;
      break;
    case FaultMode::ImuMultiplicative:
      p.gain = 1.25;
      p.axes = {true, false, true};
      break;
    case FaultMode::ImuConstantDeviation:
      p.bias = {deg2rad(3.0), 0.0, deg2rad(5.0)};
      p.axes = {true, false, true};
      break;
    case FaultMode::ImuDrift:
      p.drift_rate = deg2rad(0.5);
      p.drift_duration = 40.0;
      p.axes = {true, true, false};
      break;
    case FaultMode::ImuTransientDrift:
      p.pulse_count = 3;
      p.pulse_height = deg2rad(2.0);
      p.pulse_width = 0.5;
      p.pulse_interval = 5.0;
      p.axes = {true, true, false};
      break;
    case FaultMode::ImuDisconnect:
      p.gain = 0.0;
      break;
    case FaultMode::ServoConstantDeviation:
      p.bias = {deg2rad(-2.0), deg2rad(-2.0), deg2rad(-2.0)};
      break;
    case FaultMode::ServoStuck:
      p.gain = 0.0;
      break;
    case FaultMode::ServoLoose:
      p.gain = 0.9;
      p.wander_sigma = deg2rad(1.0);
      p.wander_tau = 1.0;
      break;
    case FaultMode::ServoDamage:
      p.gain = 0.8;
      break;
    case FaultMode::ServoJitter:
      p.gain = 0.0;
      p.jitter_on = 0.2;
      p.jitter_off = 0.2;
      break;
  }
  return p;
}

namespace {

[[noreturn]] void reject(FaultMode mode, const std::string& why) {
  throw ConstraintError(std::string(mode_name(mode)) + ": " + why);
}

bool any_axis(const FaultParams& p) { return p.axes[0] || p.axes[1] || p.axes[2]; }

bool selected_bias_zero(const FaultParams& p) {
  for (int i = 0; i < 3; ++i) {
    if (p.axes[i] && p.bias[i] != 0.0) return false;
  }
  return true;
}

bool all_finite(const FaultParams& p) {
  const double values[] = {p.gain,        p.bias[0],      p.bias[1],         p.bias[2],
                           p.drift_rate,  p.drift_duration, p.pulse_height,  p.pulse_width,
                           p.pulse_interval, p.jitter_on, p.jitter_off,      p.wander_sigma,
                           p.wander_tau,  p.position_offset};
  return std::all_of(std::begin(values), std::end(values), [](double v) { return std::isfinite(v); });
}

}  // namespace

void validate_params(FaultMode mode, const FaultParams& p) {
  if (!all_finite(p)) reject(mode, "parameters must be finite");
  switch (mode) {
    case FaultMode::GpsDeception:
      if (p.position_offset == 0.0) reject(mode, "position offset must be non-zero");
      break;
    case FaultMode::GpsWeakSignal:
    case FaultMode::GpsWeakerSignal:
      if (p.satellites < 0) reject(mode, "satellite count must be non-negative");
      break;
    case FaultMode::GpsInterruption:
      break;
    case FaultMode::ImuMultiplicative:
      if (!any_axis(p)) reject(mode, "no axis selected");
      if (p.gain == 1.0) reject(mode, "gain must differ from 1");
      if (!selected_bias_zero(p) || p.drift_rate != 0.0) reject(mode, "deviation must be 0");
      break;
    case FaultMode::ImuConstantDeviation:
      if (!any_axis(p)) reject(mode, "no axis selected");
      if (p.gain != 1.0) reject(mode, "gain must be 1");
      if (selected_bias_zero(p)) reject(mode, "bias must be non-zero on a selected axis");
      break;
    case FaultMode::ImuDrift:
      if (!any_axis(p)) reject(mode, "no axis selected");
      if (p.gain != 1.0) reject(mode, "gain must be 1");
      if (p.drift_rate == 0.0) reject(mode, "drift rate must be non-zero");
      if (!(p.drift_duration > 0.0)) reject(mode, "drift duration must be positive");
      break;
    case FaultMode::ImuTransientDrift:
      if (!any_axis(p)) reject(mode, "no axis selected");
      if (p.gain != 1.0) reject(mode, "gain must be 1");
      if (p.pulse_count < 1) reject(mode, "at least one pulse required");
      if (p.pulse_height == 0.0) reject(mode, "pulse height must be non-zero");
      if (!(p.pulse_width > 0.0)) reject(mode, "pulse width must be positive");
      if (p.pulse_count > 1 && !(p.pulse_interval > p.pulse_width)) {
        reject(mode, "pulse interval must exceed the pulse width");
      }
      break;
    case FaultMode::ImuDisconnect:
      if (p.gain != 0.0 || !(p.bias == std::array<double, 3>{})) reject(mode, "k and d must be 0");
      break;
    case FaultMode::ServoConstantDeviation:
      if (!any_axis(p)) reject(mode, "no channel selected");
      if (p.gain != 1.0) reject(mode, "gain must be 1");
      if (selected_bias_zero(p)) reject(mode, "bias must be non-zero on a selected channel");
      break;
    case FaultMode::ServoStuck:
      if (!any_axis(p)) reject(mode, "no channel selected");
      if (p.gain != 0.0) reject(mode, "gain must be 0");
      break;
    case FaultMode::ServoLoose:
      if (!any_axis(p)) reject(mode, "no channel selected");
      if (!(p.gain > 0.0 && p.gain <= 1.0)) reject(mode, "gain must lie in (0, 1]");
      if (!(p.wander_sigma > 0.0)) reject(mode, "wander sigma must be positive");
      if (!(p.wander_tau > 0.0)) reject(mode, "wander time constant must be positive");
      break;
    case FaultMode::ServoDamage:
      if (!any_axis(p)) reject(mode, "no channel selected");
      if (!(p.gain > 0.0 && p.gain < 1.0)) reject(mode, "gain must lie in (0, 1)");
      if (!selected_bias_zero(p)) reject(mode, "deviation must be 0");
      break;
    case FaultMode::ServoJitter:
      if (!any_axis(p)) reject(mode, "no channel selected");
      if (!(p.gain >= 0.0 && p.gain < 1.0)) reject(mode, "faulted gain must lie in [0, 1)");
      if (!(p.jitter_on > 0.0 && p.jitter_off > 0.0)) reject(mode, "duty periods must be positive");
      break;
  }
}

ImuFaultTemplate imu_fault_params(FaultMode mode, const FaultParams& p) {
  if (location_of(mode) != FaultLocation::Imu) reject(mode, "not an IMU fault mode");
  ImuFaultTemplate t;
  for (int i = 0; i < 3; ++i) {
    if (!p.axes[i] && mode != FaultMode::ImuDisconnect) continue;
    ChannelProfile& att = t.attitude[i];
    ChannelProfile& rate = t.rates[i];
    switch (mode) {
      case FaultMode::ImuMultiplicative:
        att.gain = p.gain;
        rate.gain = p.gain;
        break;
      case FaultMode::ImuConstantDeviation:
        att.deviation.value = p.bias[i];
        break;
      case FaultMode::ImuDrift:
        att.deviation.shape = Deviation::Shape::Ramp;
        att.deviation.rate = p.drift_rate;
        att.deviation.ramp_duration = p.drift_duration;
        break;
      case FaultMode::ImuTransientDrift:
        att.deviation.shape = Deviation::Shape::Pulses;
        att.deviation.value = p.pulse_height;
        att.deviation.pulse_count = p.pulse_count;
        att.deviation.pulse_width = p.pulse_width;
        att.deviation.pulse_interval = p.pulse_interval;
        break;
      default:  // disconnect
        att.gain = 0.0;
        rate.gain = 0.0;
        break;
    }
  }
  if (mode == FaultMode::ImuDisconnect) {
    t.specific_force.gain = 0.0;
    t.healthy = false;
  }
  return t;
}

bool ServoFaultTemplate::jitter_faulted(double elapsed) const {
  const double period = jitter_on + jitter_off;
  if (!(period > 0.0)) return true;
  return std::fmod(std::max(elapsed, 0.0), period) < jitter_on;
}

ActuatorFaultState ServoFaultTemplate::at(int channel, double elapsed, double latched,
                                          double wander) const {
  if (!channels[channel]) return {};
  switch (mode) {
    case FaultMode::ServoConstantDeviation: return {1.0, bias[channel]};
    case FaultMode::ServoStuck: return {0.0, latched};
    case FaultMode::ServoLoose: return {gain, wander};
    case FaultMode::ServoDamage: return {gain, 0.0};
    case FaultMode::ServoJitter: return jitter_faulted(elapsed) ? ActuatorFaultState{gain, 0.0} : ActuatorFaultState{};
    default: return {};
  }
}

ServoFaultTemplate servo_fault_params(FaultMode mode, const FaultParams& p) {
  if (location_of(mode) != FaultLocation::Actuator) reject(mode, "not a servo fault mode");
  ServoFaultTemplate t;
  t.mode = mode;
  t.channels = p.axes;
  t.gain = p.gain;
  switch (mode) {
    case FaultMode::ServoConstantDeviation:
      t.gain = 1.0;
      t.bias = p.bias;
      break;
    case FaultMode::ServoStuck:
      t.gain = 0.0;
      t.latch_at_onset = true;
      break;
    case FaultMode::ServoLoose:
      t.wander_sigma = p.wander_sigma;
      t.wander_tau = p.wander_tau;
      break;
    case FaultMode::ServoJitter:
      t.jitter_on = p.jitter_on;
      t.jitter_off = p.jitter_off;
      break;
    default:
      break;
  }
  return t;
}

avionics::GpsReading gps_fault_transform(const avionics::GpsReading& reading, FaultMode mode,
                                         const FaultParams& p, int validity_threshold) {
  avionics::GpsReading r = reading;
  switch (mode) {
    case FaultMode::GpsDeception:
      r.latitude += p.position_offset;
      r.longitude += p.position_offset;
      break;
    case FaultMode::GpsWeakSignal:
    case FaultMode::GpsWeakerSignal:
      r.satellites = p.satellites;
      r.fix_valid = r.fix_valid && r.satellites >= validity_threshold;
      break;
    case FaultMode::GpsInterruption:
      r.satellites = 0;
      r.fix_valid = false;
      r.received = false;
      break;
    default:
      reject(mode, "not a GPS fault mode");
  }
  return r;
}

std::vector<std::string> FaultSpec::channels() const {
  static constexpr const char* kImu[] = {"imu.x", "imu.y", "imu.z"};
  static constexpr const char* kServo[] = {"servo.elevator", "servo.aileron", "servo.rudder"};
  std::vector<std::string> out;
  switch (location_of(mode)) {
    case FaultLocation::Gps:
      out.emplace_back("gps");
      break;
    case FaultLocation::Imu:
      for (int i = 0; i < 3; ++i) {
        if (mode == FaultMode::ImuDisconnect || params.axes[i]) out.emplace_back(kImu[i]);
      }
      break;
    default:
      for (int i = 0; i < 3; ++i) {
        if (params.axes[i]) out.emplace_back(kServo[i]);
      }
      break;
  }
  return out;
}

std::string FaultSpec::describe() const {
  std::ostringstream os;
  os << mode_name(mode) << " ";
  if (anchor) {
    os << "at " << phase_name(anchor->phase) << "+" << anchor->offset << "s";
  } else if (start) {
    os << "at " << *start << "s";
  }
  os << " for " << duration << "s";
  return os.str();
}

void validate(const FaultSpec& spec) {
  if (spec.anchor) {
    if (!(std::isfinite(spec.anchor->offset) && spec.anchor->offset >= 0.0)) {
      throw ConstraintError(spec.describe() + ": phase offset must be >= 0");
    }
  } else if (!spec.start || !(std::isfinite(*spec.start) && *spec.start >= 0.0)) {
    throw ConstraintError(spec.describe() + ": start must be >= 0");
  }
  if (!(spec.duration > 0.0)) throw ConstraintError(spec.describe() + ": duration must be > 0");
  try {
    validate_params(spec.mode, spec.params);
  } catch (const ConstraintError& e) {
    throw ConstraintError(spec.describe() + ": " + e.what());
  }
}

}  // namespace uavlab::faultlab
