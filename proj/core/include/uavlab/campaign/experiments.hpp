#pragma once

#include "uavlab/autopilot/step_metrics.hpp"
#include "uavlab/campaign/simulation.hpp"

namespace uavlab::campaign {

/// Fault-free straight and level flight at the given altitude and speed.
Scenario cruise_scenario(const Scenario& base, double altitude, double airspeed, double duration);

struct StepResponse {
  RunResult run;
  autopilot::StepMetrics metrics;
  double initial_altitude = 0.0;
  double target_altitude = 0.0;
};

/// Trimmed level flight at the base altitude, altitude command raised by
/// `step` at t = 0, metrics from the true altitude trace.
StepResponse step_response_experiment(const Scenario& base, double step = 50.0, double duration = 250.0);

}  // namespace uavlab::campaign
