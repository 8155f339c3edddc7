#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavlab/avionics/rng.hpp"
#include "uavlab/avionics/sensors.hpp"
#include "uavlab/common/signals.hpp"
#include "uavlab/faultlab/fault.hpp"

namespace uavlab::faultlab {

/// Validated list of fault specs. Construction rejects specs that could be
/// active on the same channel at the same time.
class FaultSchedule {
 public:
  FaultSchedule() = default;
  explicit FaultSchedule(std::vector<FaultSpec> specs);

  const std::vector<FaultSpec>& specs() const { return specs_; }
  bool empty() const { return specs_.empty(); }
  std::size_t size() const { return specs_.size(); }

  /// Fixes the start of every unresolved spec anchored to `phase`.
  void resolve_phase_entry(Phase phase, double t);

 private:
  std::vector<FaultSpec> specs_;
};

/// Indices of the specs with start <= t < start + duration, in schedule order.
std::vector<std::size_t> schedule_active(const FaultSchedule& schedule, double t);

/// Per-run fault layer. Holds the state that must persist across ticks
/// (onset latches, loose-servo wander) and applies the active faults to the
/// signals crossing between the aircraft and the flight computer.
class FaultInjector {
 public:
  FaultInjector(FaultSchedule schedule, std::uint64_t seed, int gps_validity_threshold = 8);

  void on_phase_entry(Phase phase, double t) { schedule_.resolve_phase_entry(phase, t); }

  /// Recomputes the active set for time t. `actual` is the servo position
  /// at t, latched by faults that start now.
  void update(double t, double dt, const SurfaceActual& actual);

  const std::vector<std::size_t>& active() const { return active_; }
  /// Active labels joined with ';' (empty when fault-free).
  std::string labels() const;

  avionics::ImuReading apply_imu(const avionics::ImuReading& reading, double t) const;
  avionics::GpsReading apply_gps(const avionics::GpsReading& reading) const;
  ControlCommand apply_actuators(const ControlCommand& command, double t) const;

  const FaultSchedule& schedule() const { return schedule_; }

 private:
  struct Latch {
    bool started = false;
    std::array<double, 3> held{0.0, 0.0, 0.0};
    std::array<double, 3> wander{0.0, 0.0, 0.0};
  };

  FaultSchedule schedule_;
  std::vector<ImuFaultTemplate> imu_;
  std::vector<ServoFaultTemplate> servo_;
  std::vector<Latch> latches_;
  std::vector<std::size_t> active_;
  std::optional<avionics::RngStream> wander_rng_;  // only seeded when a fault wanders
  int gps_validity_threshold_;
};

}  // namespace uavlab::faultlab
