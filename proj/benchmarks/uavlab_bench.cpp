#include <benchmark/benchmark.h>

#include <vector>

#include "uavlab/campaign/scenario.hpp"
#include "uavlab/campaign/simulation.hpp"
#include "uavlab/common/units.hpp"
#include "uavlab/damage/features.hpp"
#include "uavlab/faultlab/schedule.hpp"
#include "uavlab/flightdyn/aero.hpp"
#include "uavlab/flightdyn/dynamics.hpp"
#include "uavlab/flightdyn/trim.hpp"

using namespace uavlab;

static void BM_Rk4Step(benchmark::State& state) {
  const auto config = flightdyn::default_aircraft();
  const auto tr = flightdyn::trim(config, 400.0, 40.0);
  const SurfaceActual u{tr.command.elevator, 0.01, -0.005, tr.command.throttle};
  flightdyn::RigidBodyState s = tr.state;
  int steps = 0;
  for (auto _ : state) {
    // Open loop, so restart from trim before the state wanders off.
    if (++steps == 1000) {
      s = tr.state;
      steps = 0;
    }
    s = flightdyn::integrate_step(s, flightdyn::AircraftForces{config, u}, 0.001, config);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4Step);

static void BM_AeroLookup(benchmark::State& state) {
  const auto tables = flightdyn::default_aero_tables();
  flightdyn::AeroInputs in{};
  in[static_cast<std::size_t>(flightdyn::AeroVariable::One)] = 1.0;
  double alpha = -0.1;
  for (auto _ : state) {
    in[static_cast<std::size_t>(flightdyn::AeroVariable::Alpha)] = alpha;
    benchmark::DoNotOptimize(tables.evaluate(in));
    alpha = alpha > 0.25 ? -0.1 : alpha + 1e-3;
  }
}
BENCHMARK(BM_AeroLookup);

static void BM_ServoFaultInjection(benchmark::State& state) {
  faultlab::FaultSpec spec;
  spec.mode = faultlab::FaultMode::ServoLoose;
  spec.params = faultlab::default_params(spec.mode);
  spec.start = 0.0;
  faultlab::FaultInjector inj(faultlab::FaultSchedule({spec}), 1);
  double t = 0.0;
  for (auto _ : state) {
    inj.update(t, 0.01, {});
    benchmark::DoNotOptimize(inj.apply_actuators({0.05, -0.02, 0.01, 0.5}, t));
    t += 0.01;
  }
}
BENCHMARK(BM_ServoFaultInjection);

static void BM_FeatureExtraction(benchmark::State& state) {
  campaign::Scenario s = campaign::default_scenario();
  s.duration = static_cast<double>(state.range(0));
  const auto frames = damage::observe(campaign::run_simulation(s).frames);
  for (auto _ : state) benchmark::DoNotOptimize(damage::extract_features(frames));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * frames.size()));
}
BENCHMARK(BM_FeatureExtraction)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_ShortSimulation(benchmark::State& state) {
  campaign::Scenario s = campaign::default_scenario();
  s.duration = 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(campaign::run_simulation(s));
}
BENCHMARK(BM_ShortSimulation)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
