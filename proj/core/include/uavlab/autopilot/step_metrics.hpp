#pragma once

#include <span>

namespace uavlab::autopilot {

struct StepMetrics {
  double overshoot_percent = 0.0;
  double settling_time = 0.0;     // s after the step, 2% band of the amplitude
  double steady_state_error = 0.0;  // |final - target|, same unit as the trace
  bool settled = false;
};

/// Metrics of a step response. `times` and `values` are the sampled trace,
/// `initial` the pre-step value, `target` the commanded final value and
/// `step_time` the instant the step is applied. The steady-state error is
/// averaged over the last 10% of the trace.
StepMetrics step_metrics(std::span<const double> times, std::span<const double> values, double initial,
                         double target, double step_time = 0.0);

}  // namespace uavlab::autopilot
