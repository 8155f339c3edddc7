#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uavlab/campaign/scenario.hpp"
#include "uavlab/campaign/telemetry.hpp"

namespace uavlab::campaign {

enum class Termination { Duration, GroundImpact, Diverged };

std::string_view termination_name(Termination t);

struct Transition {
  double t = 0.0;
  std::string kind;  // "phase", "failsafe" or "fault"
  std::string from;
  std::string to;
};

struct RunSummary {
  std::string scenario;
  std::uint64_t seed = 0;
  Termination termination = Termination::Duration;
  std::string message;  // divergence detail
  flightdyn::RigidBodyState final_state;
  double initial_airspeed = 0.0;
  std::vector<Transition> transitions;
  std::size_t frames = 0;
};

struct RunResult {
  std::vector<TelemetryFrame> frames;
  RunSummary summary;
};

struct SimulationOptions {
  /// Skips the fault layer entirely (signals pass straight through).
  bool bypass_faults = false;
  /// Overrides the mission altitude at the given time (step experiments).
  std::optional<std::pair<double, double>> altitude_step;  // (time, new altitude)
};

/// Closed-loop run. Each control tick:
///   sense -> sensor faults -> integrity monitors -> navigation -> failsafe
///   -> phase -> autopilot -> actuator faults -> log -> servo + physics
/// with `control_substeps` physics steps per tick. Stops at the duration,
/// on ground impact, or when the integrator diverges.
RunResult run_simulation(const Scenario& scenario, const SimulationOptions& options = {});

std::string summary_to_json(const RunSummary& summary, const Scenario& scenario);

/// Writes `<stem>.csv` and `<stem>.json` (scenario metadata plus summary).
void write_run_outputs(const std::filesystem::path& stem, const RunResult& result, const Scenario& scenario);

}  // namespace uavlab::campaign
