#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "uavlab/autopilot/controller.hpp"
#include "uavlab/autopilot/failsafe.hpp"
#include "uavlab/autopilot/mission.hpp"
#include "uavlab/autopilot/step_metrics.hpp"
#include "uavlab/campaign/experiments.hpp"
#include "uavlab/campaign/scenario.hpp"
#include "uavlab/common/error.hpp"

using namespace uavlab;
using namespace uavlab::autopilot;

namespace {

TrimPoint make_trim() {
  TrimPoint t;
  t.command = {deg2rad(-1.5), 0.0, 0.0, 0.42};
  t.pitch = deg2rad(2.0);
  return t;
}

// Exactly on the trim condition, flying north along the route.
NavSolution on_condition(const MissionPlan& plan, const TrimPoint& trim, double t) {
  NavSolution nav;
  nav.time = t;
  nav.position_ned = flightdyn::Vec3(0.0, 0.0, -plan.cruise_altitude);
  nav.velocity_ned = flightdyn::Vec3(plan.cruise_speed, 0.0, 0.0);
  nav.attitude = {0.0, trim.pitch, 0.0};
  nav.airspeed = plan.cruise_speed;
  return nav;
}

FlightPhase level(double entered = 0.0) { return {Phase::LevelFlight, entered, std::nullopt}; }

}  // namespace

TEST(Autopilot, ZeroErrorGivesTrimCommand) {
  const auto trim = make_trim();
  const auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  Autopilot ap({}, trim);
  for (int i = 1; i <= 500; ++i) {
    const auto out = ap.update(on_condition(plan, trim, i * 0.01), plan, level(), {}, 0.01);
    ASSERT_EQ(out.command, trim.command) << "step " << i;
    ASSERT_EQ(out.pitch_target, trim.pitch);
  }
}

TEST(Autopilot, LowAltitudeRaisesPitchTarget) {
  const auto trim = make_trim();
  const auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  Autopilot ap({}, trim);
  auto nav = on_condition(plan, trim, 0.01);
  nav.position_ned.z() = -390.0;
  const auto out = ap.update(nav, plan, level(), {}, 0.01);
  EXPECT_GT(out.pitch_target, trim.pitch);
}

TEST(Autopilot, ImuPositioningWithExactEstimateMatchesNominal) {
  const auto trim = make_trim();
  const auto plan = straight_mission(deg2rad(30.0), 20000.0, 400.0, 40.0);
  Autopilot a({}, trim);
  Autopilot b({}, trim);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 1; i <= 300; ++i) {
    NavSolution nav = on_condition(plan, trim, i * 0.01);
    nav.position_ned += flightdyn::Vec3(20 * n(rng), 20 * n(rng), 3 * n(rng));
    nav.attitude.roll = 0.05 * n(rng);
    nav.rates = flightdyn::Vec3(0.01 * n(rng), 0.01 * n(rng), 0.01 * n(rng));
    NavSolution dr = nav;
    dr.source = avionics::NavSource::DeadReckoning;
    const auto oa = a.update(nav, plan, level(), {FailsafeKind::Nominal, 0.0}, 0.01);
    const auto ob = b.update(dr, plan, level(), {FailsafeKind::ImuPositioning, 0.0}, 0.01);
    ASSERT_EQ(oa.command, ob.command);
  }
}

TEST(Autopilot, FallbackHoldsThreeDegreesWithZeroThrottle) {
  const auto trim = make_trim();
  const auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  Autopilot ap({}, trim);
  const FailsafeMode fs{FailsafeKind::LevelFlightFallback, 10.0};
  for (int i = 0; i < 100; ++i) {
    auto nav = on_condition(plan, trim, 10.0 + i * 0.01);
    nav.attitude.yaw = deg2rad(45.0);
    const auto out = ap.update(nav, plan, level(), fs, 0.01);
    EXPECT_EQ(out.command.throttle, 0.0);
    EXPECT_NEAR(out.pitch_target, deg2rad(3.0), 1e-12);
    EXPECT_NEAR(out.course_target, deg2rad(45.0), 1e-12);  // heading hold at entry heading
  }
}

TEST(Autopilot, HoldLastRudderFreezesCommand) {
  const auto trim = make_trim();
  const auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  Autopilot ap({}, trim);
  auto nav = on_condition(plan, trim, 0.01);
  nav.position_ned.z() = -405.0;  // produces a nose-down elevator command
  ControlCommand last;
  for (int i = 1; i <= 50; ++i) {
    nav.time = i * 0.01;
    last = ap.update(nav, plan, level(), {}, 0.01).command;
  }
  const FailsafeMode hold{FailsafeKind::HoldLastRudder, 0.5};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    NavSolution wild = nav;
    wild.time = 0.5 + i * 0.01;
    wild.attitude = {u(rng), u(rng), 3 * u(rng)};
    wild.rates = flightdyn::Vec3(u(rng), u(rng), u(rng));
    wild.airspeed = 40 + 10 * u(rng);
    const auto out = ap.update(wild, plan, level(), hold, 0.01);
    ASSERT_EQ(out.command.elevator, last.elevator);
    ASSERT_EQ(out.command.aileron, last.aileron);
    ASSERT_EQ(out.command.rudder, last.rudder);
    ASSERT_EQ(out.command.throttle, 0.0);
  }
}

TEST(Autopilot, HoldLastRudderCanKeepThrottle) {
  const auto trim = make_trim();
  const auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  FailsafeConfig cfg;
  cfg.hold_zero_throttle = false;
  Autopilot ap({}, trim, cfg);
  const auto first = ap.update(on_condition(plan, trim, 0.01), plan, level(), {}, 0.01);
  const auto held = ap.update(on_condition(plan, trim, 0.02), plan, level(), {FailsafeKind::HoldLastRudder, 0.02}, 0.01);
  EXPECT_EQ(held.command.throttle, first.command.throttle);
}

TEST(Autopilot, SanitizeReplacesNonFiniteAndClamps) {
  const ControlCommand fallback{0.01, 0.02, 0.03, 0.4};
  const ControlCommand bad{std::nan(""), 2.0, -2.0, 1.7};
  const auto c = sanitize(bad, fallback, deg2rad(25.0));
  EXPECT_EQ(c.elevator, fallback.elevator);
  EXPECT_EQ(c.aileron, deg2rad(25.0));
  EXPECT_EQ(c.rudder, -deg2rad(25.0));
  EXPECT_EQ(c.throttle, 1.0);
}

TEST(Failsafe, ValidFixStaysNominal) {
  const FailsafeMode m = failsafe_step({}, true, true, 12.0);
  EXPECT_EQ(m.kind, FailsafeKind::Nominal);
}

TEST(Failsafe, InterruptionTimeline) {
  FailsafeMode m;
  m = failsafe_step(m, false, true, 136.0);
  EXPECT_EQ(m.kind, FailsafeKind::ImuPositioning);
  EXPECT_EQ(m.entered_at, 136.0);
  for (double t = 136.01; t < 165.995; t += 0.01) {
    m = failsafe_step(m, false, true, t);
    ASSERT_EQ(m.kind, FailsafeKind::ImuPositioning) << t;
  }
  m = failsafe_step(m, false, true, 166.0);
  EXPECT_EQ(m.kind, FailsafeKind::LevelFlightFallback);
  EXPECT_EQ(m.entered_at, 166.0);
}

TEST(Failsafe, GpsRecoveryDoesNotCancelPositioningWindow) {
  FailsafeMode m = failsafe_step({}, false, true, 10.0);
  m = failsafe_step(m, true, true, 20.0);
  EXPECT_EQ(m.kind, FailsafeKind::ImuPositioning);
  m = failsafe_step(m, true, true, 40.0);
  EXPECT_EQ(m.kind, FailsafeKind::LevelFlightFallback);
}

TEST(Failsafe, ImuFailureHoldsLastRudder) {
  EXPECT_EQ(failsafe_step({}, true, false, 5.0).kind, FailsafeKind::HoldLastRudder);
  EXPECT_EQ(failsafe_step({FailsafeKind::ImuPositioning, 1.0}, false, false, 5.0).kind,
            FailsafeKind::HoldLastRudder);
}

TEST(Failsafe, TerminalStatesLatch) {
  const FailsafeMode fb{FailsafeKind::LevelFlightFallback, 50.0};
  const FailsafeMode hold{FailsafeKind::HoldLastRudder, 50.0};
  for (bool gps : {true, false}) {
    for (bool imu : {true, false}) {
      EXPECT_EQ(failsafe_step(fb, gps, imu, 99.0), fb);
      EXPECT_EQ(failsafe_step(hold, gps, imu, 99.0), hold);
    }
  }
}

TEST(Phase, ClimbCapturesAfterHold) {
  auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  FlightPhase p{Phase::Climb, 0.0, std::nullopt};
  NavSolution nav;
  nav.position_ned.z() = -398.0;
  for (double t = 10.0; t < 11.995; t += 0.01) {
    nav.time = t;
    p = phase_step(p, nav, plan);
    ASSERT_EQ(p.phase, Phase::Climb);
  }
  nav.time = 12.0;
  p = phase_step(p, nav, plan);
  EXPECT_EQ(p.phase, Phase::LevelFlight);
  EXPECT_EQ(p.entered_at, 12.0);
}

TEST(Phase, LeavingCaptureBandResetsTimer) {
  auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  FlightPhase p{Phase::Climb, 0.0, std::nullopt};
  NavSolution nav;
  nav.position_ned.z() = -400.0;
  nav.time = 1.0;
  p = phase_step(p, nav, plan);
  nav.position_ned.z() = -380.0;
  nav.time = 2.0;
  p = phase_step(p, nav, plan);
  nav.position_ned.z() = -400.0;
  nav.time = 3.5;
  p = phase_step(p, nav, plan);
  EXPECT_EQ(p.phase, Phase::Climb);
}

TEST(Phase, LevelFlightWithoutTriggerStays) {
  auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  NavSolution nav;
  nav.time = 1e5;
  nav.position_ned.z() = -400.0;
  EXPECT_EQ(phase_step(level(), nav, plan).phase, Phase::LevelFlight);
}

TEST(Phase, LevelFlightTimerTriggersGlide) {
  auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  plan.level_flight_duration = 150.0;
  NavSolution nav;
  nav.time = 149.99;
  EXPECT_EQ(phase_step(level(), nav, plan).phase, Phase::LevelFlight);
  nav.time = 150.0;
  EXPECT_EQ(phase_step(level(), nav, plan).phase, Phase::GlideSlope);
}

TEST(Phase, GlideBelowAttackAltitudeAttacks) {
  auto plan = straight_mission(0.0, 20000.0, 400.0, 40.0);
  FlightPhase p{Phase::GlideSlope, 150.0, std::nullopt};
  NavSolution nav;
  nav.time = 300.0;
  nav.position_ned.z() = -81.0;
  EXPECT_EQ(phase_step(p, nav, plan).phase, Phase::GlideSlope);
  nav.position_ned.z() = -79.0;
  EXPECT_EQ(phase_step(p, nav, plan).phase, Phase::Attack);
}

TEST(Mission, ValidationRejectsBadPlans) {
  MissionPlan p;
  EXPECT_THROW(p.validate(), ConfigError);
  p = straight_mission(0.0, 1000.0, 100.0, 30.0);
  EXPECT_NO_THROW(p.validate());
  p.waypoints[0].altitude = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(StepMetrics, MonotoneResponseHasNoOvershoot) {
  std::vector<double> t, y;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(i * 0.01);
    y.push_back(50.0 * (1.0 - std::exp(-t.back())));
  }
  const auto m = step_metrics(t, y, 0.0, 50.0);
  EXPECT_EQ(m.overshoot_percent, 0.0);
  EXPECT_TRUE(m.settled);
  // 2% band reached when e^{-t} = 0.02.
  EXPECT_NEAR(m.settling_time, std::log(50.0), 0.011);
}

TEST(StepMetrics, SecondOrderOvershootMatchesAnalytic) {
  const double zeta = 0.5;
  const double wn = 1.0;
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  const double phi = std::acos(zeta);
  std::vector<double> t, y;
  for (int i = 0; i <= 40000; ++i) {
    const double tt = i * 0.001;
    t.push_back(tt);
    y.push_back(1.0 - std::exp(-zeta * wn * tt) / std::sqrt(1.0 - zeta * zeta) * std::sin(wd * tt + phi));
  }
  const double expected = 100.0 * std::exp(-kPi * zeta / std::sqrt(1.0 - zeta * zeta));
  const auto m = step_metrics(t, y, 0.0, 1.0);
  EXPECT_NEAR(expected, 16.3, 0.05);
  EXPECT_NEAR(m.overshoot_percent, expected, 0.2);
  EXPECT_LT(m.steady_state_error, 1e-6);
}

TEST(StepMetrics, PureFunctionOfTrace) {
  std::vector<double> t{0, 1, 2, 3, 4, 5}, y{0, 6, 12, 10.5, 9.9, 10};
  const auto a = step_metrics(t, y, 0.0, 10.0);
  const auto b = step_metrics(t, y, 0.0, 10.0);
  EXPECT_EQ(a.overshoot_percent, b.overshoot_percent);
  EXPECT_EQ(a.settling_time, b.settling_time);
  EXPECT_EQ(a.steady_state_error, b.steady_state_error);
  EXPECT_NEAR(a.overshoot_percent, 20.0, 1e-12);
}

TEST(StepMetrics, RejectsDegenerateInput) {
  std::vector<double> t{0.0}, y{0.0};
  EXPECT_THROW(step_metrics(t, y, 0.0, 1.0), AnalysisError);
  std::vector<double> t2{0, 1}, y2{0, 1};
  EXPECT_THROW(step_metrics(t2, y2, 1.0, 1.0), AnalysisError);
}

TEST(StepResponse, ClosedLoopFiftyMetreStep) {
  const auto r = campaign::step_response_experiment(campaign::default_scenario(), 50.0, 250.0);
  EXPECT_GE(r.metrics.overshoot_percent, 10.0);
  EXPECT_LE(r.metrics.overshoot_percent, 35.0);
  EXPECT_LT(r.metrics.steady_state_error, 0.5);
  EXPECT_TRUE(r.metrics.settled);
  EXPECT_EQ(r.target_altitude - r.initial_altitude, 50.0);
}
