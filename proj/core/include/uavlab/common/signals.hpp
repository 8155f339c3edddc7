#pragma once

namespace uavlab {

/// Autopilot output (the expected servo output u_c of the actuator fault
/// model). Surfaces in radians, throttle in [0, 1].
struct ControlCommand {
  double elevator = 0.0;
  double aileron = 0.0;
  double rudder = 0.0;
  double throttle = 0.0;

  friend bool operator==(const ControlCommand&, const ControlCommand&) = default;
};

/// Deflections actually realised by the servos (u_m) and the actual throttle.
struct SurfaceActual {
  double elevator = 0.0;
  double aileron = 0.0;
  double rudder = 0.0;
  double throttle = 0.0;

  friend bool operator==(const SurfaceActual&, const SurfaceActual&) = default;
};

enum class ServoChannel { Elevator = 0, Aileron = 1, Rudder = 2 };
inline constexpr int kServoChannelCount = 3;

inline double& channel(ControlCommand& c, ServoChannel ch) {
  switch (ch) {
    case ServoChannel::Elevator: return c.elevator;
    case ServoChannel::Aileron: return c.aileron;
    default: return c.rudder;
  }
}
inline double channel(const ControlCommand& c, ServoChannel ch) {
  return channel(const_cast<ControlCommand&>(c), ch);
}
inline double& channel(SurfaceActual& s, ServoChannel ch) {
  switch (ch) {
    case ServoChannel::Elevator: return s.elevator;
    case ServoChannel::Aileron: return s.aileron;
    default: return s.rudder;
  }
}
inline double channel(const SurfaceActual& s, ServoChannel ch) {
  return channel(const_cast<SurfaceActual&>(s), ch);
}

}  // namespace uavlab
