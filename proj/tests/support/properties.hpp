#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace uavlab::testing {

// Outcome of a randomized invariant check. `failures` counts cases that
// violated the invariant; `detail` describes the first one.
struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest observed violation measure, property specific
  std::string detail;

  bool ok() const { return cases > 0 && failures == 0; }
};

// k*x + d exactness of the sensor and actuator fault paths through the
// injector, over random parameters, inputs and times for every fault mode.
PropertyResult check_fault_algebra(std::size_t cases, std::uint64_t seed);

// Unit quaternion after every RK4 step under random states and wrenches.
PropertyResult check_quaternion_norm(std::size_t cases, std::uint64_t seed);

// Autopilot outputs stay within surface and throttle limits for random
// finite measurement streams in every phase and failsafe mode.
PropertyResult check_command_clamping(std::size_t cases, std::uint64_t seed);

// A stuck servo's commanded and realised positions equal the onset value
// exactly, whatever the autopilot asks for afterwards.
PropertyResult check_stuck_latch(std::size_t cases, std::uint64_t seed);

// Injector labels equal the specs with start <= t < start + duration.
PropertyResult check_label_fidelity(std::size_t cases, std::uint64_t seed);

// Mechanical energy does not grow under zero thrust (1e-6 relative per step).
PropertyResult check_energy_monotonic(std::size_t cases, std::uint64_t seed);

// Servo output respects position and rate limits for random command streams.
PropertyResult check_servo_limits(std::size_t cases, std::uint64_t seed);

// Jitter output repeats with the configured on + off period.
PropertyResult check_jitter_periodicity(std::size_t cases, std::uint64_t seed);

}  // namespace uavlab::testing
