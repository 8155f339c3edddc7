#include "uavlab/autopilot/step_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "uavlab/common/error.hpp"

namespace uavlab::autopilot {

StepMetrics step_metrics(std::span<const double> times, std::span<const double> values, double initial,
                         double target, double step_time) {
  if (times.size() != values.size() || times.size() < 2) {
    throw AnalysisError("step trace needs at least two matching samples");
  }
  const double amplitude = target - initial;
  if (amplitude == 0.0) throw AnalysisError("step amplitude must be non-zero");
  const double sign = amplitude > 0.0 ? 1.0 : -1.0;

  StepMetrics m;
  double peak = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < step_time) continue;
    peak = std::max(peak, sign * (values[i] - target));
  }
  m.overshoot_percent = 100.0 * peak / std::abs(amplitude);

  const double band = 0.02 * std::abs(amplitude);
  std::size_t last_outside = times.size();
  for (std::size_t i = times.size(); i-- > 0;) {
    if (times[i] < step_time) break;
    if (std::abs(values[i] - target) > band) {
      last_outside = i;
      break;
    }
  }
  if (last_outside == times.size()) {
    m.settled = true;
    m.settling_time = 0.0;
  } else if (last_outside + 1 < times.size()) {
    m.settled = true;
    m.settling_time = times[last_outside + 1] - step_time;
  } else {
    m.settled = false;
    m.settling_time = times.back() - step_time;
  }

  const std::size_t tail = std::max<std::size_t>(1, times.size() / 10);
  double sum = 0.0;
  for (std::size_t i = times.size() - tail; i < times.size(); ++i) sum += values[i];
  m.steady_state_error = std::abs(sum / static_cast<double>(tail) - target);
  return m;
}

}  // namespace uavlab::autopilot
