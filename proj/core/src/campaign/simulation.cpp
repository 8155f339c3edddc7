#include "uavlab/campaign/simulation.hpp"

#include <cmath>

#include "uavlab/autopilot/controller.hpp"
#include "uavlab/avionics/navigation.hpp"
#include "uavlab/avionics/servo.hpp"
#include "uavlab/flightdyn/dynamics.hpp"
#include "uavlab/flightdyn/trim.hpp"

namespace uavlab::campaign {

using flightdyn::RigidBodyState;

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Duration: return "duration";
    case Termination::GroundImpact: return "ground_impact";
    case Termination::Diverged: return "diverged";
  }
  return "unknown";
}

namespace {

flightdyn::Vec3 specific_force(const RigidBodyState& s, const SurfaceActual& actual,
                               const flightdyn::AircraftConfig& config) {
  const flightdyn::Wrench w = flightdyn::AircraftForces{config, actual}(s);
  return w.force / config.mass;
}

}  // namespace

RunResult run_simulation(const Scenario& sc, const SimulationOptions& options) {
  sc.validate();
  const auto& cfg = sc.aircraft;
  flightdyn::TrimOptions trim_opts;
  trim_opts.heading = sc.initial.heading;
  const flightdyn::TrimResult trimmed =
      flightdyn::trim(cfg, sc.initial.altitude, sc.initial.airspeed, trim_opts);

  RunResult result;
  RunSummary& summary = result.summary;
  summary.scenario = sc.name;
  summary.seed = sc.seed;
  summary.initial_airspeed = sc.initial.airspeed;

  RigidBodyState state = trimmed.state;
  state.time = 0.0;

  autopilot::TrimPoint trim_point{trimmed.command, trimmed.state.euler().pitch};
  autopilot::Autopilot ap(sc.gains, trim_point, sc.failsafe);
  avionics::ServoState servo{SurfaceActual{trimmed.command.elevator, trimmed.command.aileron,
                                           trimmed.command.rudder, trimmed.command.throttle}};

  auto imu_rng = avionics::make_stream(sc.seed, avionics::StreamId::Imu);
  auto gps_rng = avionics::make_stream(sc.seed, avionics::StreamId::Gps);
  auto air_rng = avionics::make_stream(sc.seed, avionics::StreamId::AirData);

  std::optional<faultlab::FaultInjector> injector;
  if (!options.bypass_faults) injector.emplace(sc.faults, sc.seed, sc.gps_integrity.validity_threshold);

  avionics::GpsIntegrityMonitor gps_monitor(sc.origin, sc.gps_integrity);
  avionics::ImuHealthMonitor imu_monitor(sc.imu_monitor);
  avionics::NavFilter nav_filter(sc.origin, avionics::nav_from_truth(state));

  autopilot::FlightPhase phase{sc.initial.phase, 0.0, std::nullopt};
  autopilot::FailsafeMode failsafe;
  if (injector) injector->on_phase_entry(phase.phase, 0.0);

  const double dtc = sc.control_period();
  const int log_every = sc.log_decimation();
  const auto total_ticks = static_cast<long long>(std::llround(sc.duration / dtc));
  avionics::GpsReading last_gps;
  std::string last_labels;
  bool altitude_stepped = false;

  for (long long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dtc;
    state.time = t;

    // Sense.
    const avionics::TruthSample truth{state, specific_force(state, servo.actual, cfg)};
    avionics::ImuReading imu = avionics::imu_measure(truth, sc.sensors.imu, imu_rng);
    imu.time = t;
    const bool epoch = k % sc.gps_decimation == 0;
    std::optional<avionics::GpsReading> gps;
    if (epoch) gps = avionics::gps_measure(state, sc.origin, sc.sensors.gps, gps_rng);
    const avionics::AirDataReading air = avionics::airspeed_measure(state, sc.sensors.airspeed_sigma, air_rng);

    // Sensor faults.
    if (injector) {
      injector->update(t, dtc, servo.actual);
      imu = injector->apply_imu(imu, t);
      if (gps) gps = injector->apply_gps(*gps);
      const std::string labels = injector->labels();
      if (labels != last_labels) {
        summary.transitions.push_back({t, "fault", last_labels, labels});
        last_labels = labels;
      }
    }
    if (gps) last_gps = *gps;

    // Integrity monitors, navigation, failsafe, phase.
    const bool gps_valid = gps_monitor.update(epoch, gps, t);
    const bool imu_ok = imu_monitor.update(imu, dtc);
    const avionics::NavSolution& nav =
        k == 0 ? nav_filter.solution() : nav_filter.update(imu, gps, gps_valid, air, dtc);

    const autopilot::FailsafeMode next_fs = autopilot::failsafe_step(failsafe, gps_valid, imu_ok, t, sc.failsafe);
    if (next_fs.kind != failsafe.kind) {
      summary.transitions.push_back({t, "failsafe", std::string(autopilot::failsafe_name(failsafe.kind)),
                                     std::string(autopilot::failsafe_name(next_fs.kind))});
    }
    failsafe = next_fs;
    if (failsafe.kind == autopilot::FailsafeKind::Nominal ||
        failsafe.kind == autopilot::FailsafeKind::ImuPositioning) {
      const autopilot::FlightPhase next_phase = autopilot::phase_step(phase, nav, sc.mission);
      if (next_phase.phase != phase.phase) {
        summary.transitions.push_back({t, "phase", std::string(phase_name(phase.phase)),
                                       std::string(phase_name(next_phase.phase))});
        if (injector) injector->on_phase_entry(next_phase.phase, t);
      }
      phase = next_phase;
    }

    // Control.
    if (options.altitude_step && !altitude_stepped && t >= options.altitude_step->first - 1e-9) {
      ap.set_altitude_override(options.altitude_step->second);
      altitude_stepped = true;
    }
    const autopilot::AutopilotOutput out = ap.update(nav, sc.mission, phase, failsafe, dtc);
    const ControlCommand to_servo = injector ? injector->apply_actuators(out.command, t) : out.command;

    // Log.
    const bool impact = k > 0 && state.position_ned.z() >= 0.0 && state.velocity_ned().z() > 0.0;
    const bool finished = impact || k >= total_ticks;
    if (k % log_every == 0 || finished) {
      TelemetryFrame f;
      f.t = t;
      f.position = state.position_ned;
      f.velocity_body = state.velocity_body;
      f.attitude = state.euler();
      f.rates = state.angular_rates;
      f.imu = imu;
      f.gps = last_gps;
      f.airspeed = air.airspeed;
      f.nav_source = nav.source;
      f.phase = phase.phase;
      f.failsafe = failsafe.kind;
      f.command = out.command;
      f.actual = servo.actual;
      f.fault_labels = injector ? injector->labels() : std::string();
      f.pitch_target = out.pitch_target;
      f.roll_target = out.roll_target;
      result.frames.push_back(std::move(f));
    }
    if (finished) {
      summary.termination = impact ? Termination::GroundImpact : Termination::Duration;
      break;
    }

    // Servo and physics.
    try {
      for (int s = 0; s < sc.control_substeps; ++s) {
        const SurfaceActual actual = avionics::servo_dynamics(to_servo, servo, sc.dt, sc.servo);
        state = flightdyn::integrate_step(state, flightdyn::AircraftForces{cfg, actual}, sc.dt, cfg);
      }
    } catch (const flightdyn::SimulationDiverged& e) {
      summary.termination = Termination::Diverged;
      summary.message = e.what();
      state = e.last_valid();
      break;
    }
  }
  summary.final_state = state;
  summary.frames = result.frames.size();
  return result;
}

}  // namespace uavlab::campaign
