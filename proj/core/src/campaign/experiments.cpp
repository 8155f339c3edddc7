#include "uavlab/campaign/experiments.hpp"

#include <limits>

namespace uavlab::campaign {

Scenario cruise_scenario(const Scenario& base, double altitude, double airspeed, double duration) {
  Scenario s = base;
  s.name = "cruise";
  s.duration = duration;
  s.faults = faultlab::FaultSchedule{};
  s.initial.altitude = altitude;
  s.initial.airspeed = airspeed;
  s.initial.phase = Phase::LevelFlight;
  const double range = 2.0 * airspeed * duration + 1000.0;
  s.mission = autopilot::straight_mission(s.initial.heading, range, altitude, airspeed);
  s.mission.level_flight_duration = std::numeric_limits<double>::infinity();
  s.validate();
  return s;
}

StepResponse step_response_experiment(const Scenario& base, double step, double duration) {
  Scenario s = cruise_scenario(base, base.initial.altitude, base.initial.airspeed, duration);
  s.name = "step_response";
  StepResponse out;
  out.initial_altitude = s.initial.altitude;
  out.target_altitude = s.initial.altitude + step;
  SimulationOptions opts;
  opts.altitude_step = std::make_pair(0.0, out.target_altitude);
  out.run = run_simulation(s, opts);
  std::vector<double> t, h;
  t.reserve(out.run.frames.size());
  h.reserve(out.run.frames.size());
  for (const auto& f : out.run.frames) {
    t.push_back(f.t);
    h.push_back(-f.position.z());
  }
  out.metrics = autopilot::step_metrics(t, h, out.initial_altitude, out.target_altitude, 0.0);
  return out;
}

}  // namespace uavlab::campaign
