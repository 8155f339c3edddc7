#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "uavlab/common/error.hpp"
#include "uavlab/common/units.hpp"
#include "uavlab/faultlab/fault.hpp"
#include "uavlab/faultlab/modes.hpp"
#include "uavlab/faultlab/schedule.hpp"

using namespace uavlab;
using namespace uavlab::faultlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FaultSpec spec_at(FaultMode mode, double start, double duration = kInf) {
  FaultSpec s;
  s.mode = mode;
  s.params = default_params(mode);
  s.start = start;
  s.duration = duration;
  return s;
}

avionics::GpsReading good_fix() {
  avionics::GpsReading r;
  r.latitude = 34.0;
  r.longitude = 108.0;
  r.altitude = 400.0;
  r.satellites = 15;
  r.fix_valid = true;
  return r;
}

}  // namespace

TEST(FaultAlgebra, IdentityAndGain) {
  EXPECT_EQ(apply_sensor_fault(5.0, {1.0, 0.0}), 5.0);
  EXPECT_EQ(apply_sensor_fault(10.0, {1.25, 0.0}), 12.5);
  EXPECT_EQ(apply_sensor_fault(7.3, {0.0, 0.0}), 0.0);
}

TEST(FaultAlgebra, ActuatorExamples) {
  EXPECT_NEAR(apply_actuator_fault(deg2rad(5.0), {1.0, deg2rad(-2.0)}), deg2rad(3.0), 1e-15);
  EXPECT_NEAR(apply_actuator_fault(deg2rad(10.0), {0.8, 0.0}), deg2rad(8.0), 1e-15);
  EXPECT_EQ(apply_actuator_fault(deg2rad(17.0), {0.0, deg2rad(4.0)}), deg2rad(4.0));
}

TEST(Modes, NamesRoundTrip) {
  ASSERT_EQ(all_fault_modes().size(), 14u);
  ASSERT_EQ(campaign_fault_modes().size(), 13u);
  std::set<std::string> names;
  for (FaultMode m : all_fault_modes()) {
    const auto name = mode_name(m);
    names.emplace(name);
    ASSERT_EQ(parse_mode(name), m);
    ASSERT_NE(location_of(m), FaultLocation::None);
  }
  EXPECT_EQ(names.size(), 14u);
  EXPECT_FALSE(parse_mode("gremlins").has_value());
}

TEST(Modes, CampaignCountsPerLocation) {
  int gps = 0, imu = 0, act = 0;
  for (FaultMode m : campaign_fault_modes()) {
    switch (location_of(m)) {
      case FaultLocation::Gps: ++gps; break;
      case FaultLocation::Imu: ++imu; break;
      case FaultLocation::Actuator: ++act; break;
      default: FAIL();
    }
  }
  EXPECT_EQ(gps, 4);
  EXPECT_EQ(imu, 4);
  EXPECT_EQ(act, 5);
}

TEST(Modes, DefaultParamsAreValid) {
  for (FaultMode m : all_fault_modes()) EXPECT_NO_THROW(validate_params(m, default_params(m))) << mode_name(m);
}

TEST(Gps, DeceptionShiftsBothCoordinates) {
  const auto r = gps_fault_transform(good_fix(), FaultMode::GpsDeception, default_params(FaultMode::GpsDeception));
  EXPECT_NEAR(r.latitude, 34.05, 1e-12);
  EXPECT_NEAR(r.longitude, 108.05, 1e-12);
  EXPECT_EQ(r.altitude, 400.0);
  EXPECT_TRUE(r.fix_valid);
}

TEST(Gps, WeakSignalKeepsFix) {
  const auto r = gps_fault_transform(good_fix(), FaultMode::GpsWeakSignal, default_params(FaultMode::GpsWeakSignal));
  EXPECT_EQ(r.satellites, 12);
  EXPECT_TRUE(r.fix_valid);
}

TEST(Gps, WeakerSignalLosesFixBelowThreshold) {
  const auto r =
      gps_fault_transform(good_fix(), FaultMode::GpsWeakerSignal, default_params(FaultMode::GpsWeakerSignal));
  EXPECT_LT(r.satellites, 8);
  EXPECT_FALSE(r.fix_valid);
  const auto lenient = gps_fault_transform(good_fix(), FaultMode::GpsWeakerSignal,
                                           default_params(FaultMode::GpsWeakerSignal), r.satellites);
  EXPECT_TRUE(lenient.fix_valid);
}

TEST(Gps, InterruptionDropsEpoch) {
  const auto r =
      gps_fault_transform(good_fix(), FaultMode::GpsInterruption, default_params(FaultMode::GpsInterruption));
  EXPECT_FALSE(r.fix_valid);
  EXPECT_FALSE(r.received);
  EXPECT_EQ(r.satellites, 0);
}

TEST(Gps, NonGpsModeRejected) {
  EXPECT_THROW(gps_fault_transform(good_fix(), FaultMode::ServoStuck, {}), ConstraintError);
}

TEST(Imu, ConstantDeviationPerAxis) {
  const auto t = imu_fault_params(FaultMode::ImuConstantDeviation);
  EXPECT_NEAR(t.attitude[0].at(12.0).d, deg2rad(3.0), 1e-15);
  EXPECT_EQ(t.attitude[1].at(12.0).d, 0.0);
  EXPECT_NEAR(t.attitude[2].at(12.0).d, deg2rad(5.0), 1e-15);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(t.attitude[a].gain, 1.0);
    EXPECT_TRUE(t.rates[a].is_identity());
  }
  EXPECT_TRUE(t.healthy);
}

TEST(Imu, MultiplicativeScalesSelectedAxes) {
  const auto t = imu_fault_params(FaultMode::ImuMultiplicative);
  EXPECT_EQ(t.attitude[0].gain, 1.25);
  EXPECT_EQ(t.attitude[1].gain, 1.0);
  EXPECT_EQ(t.attitude[2].gain, 1.25);
  EXPECT_EQ(t.rates[0].gain, 1.25);
}

TEST(Imu, DriftRampsThenHolds) {
  const auto p = default_params(FaultMode::ImuDrift);
  const auto t = imu_fault_params(FaultMode::ImuDrift, p);
  EXPECT_EQ(t.attitude[0].at(0.0).d, 0.0);
  EXPECT_NEAR(t.attitude[0].at(10.0).d, 10.0 * p.drift_rate, 1e-15);
  EXPECT_NEAR(t.attitude[0].at(40.0).d, 40.0 * p.drift_rate, 1e-15);
  EXPECT_EQ(t.attitude[0].at(90.0).d, t.attitude[0].at(40.0).d);
  EXPECT_EQ(p.drift_duration, 40.0);
  EXPECT_TRUE(t.attitude[2].is_identity());
}

TEST(Imu, TransientDriftPulses) {
  const auto p = default_params(FaultMode::ImuTransientDrift);
  const auto t = imu_fault_params(FaultMode::ImuTransientDrift, p);
  int on = 0;
  for (int i = 0; i < 3000; ++i) {
    if (t.attitude[0].at(i * 0.01).d != 0.0) ++on;
  }
  EXPECT_EQ(on, static_cast<int>(std::lround(p.pulse_count * p.pulse_width / 0.01)));
  EXPECT_EQ(t.attitude[0].at(p.pulse_interval).d, p.pulse_height);
  EXPECT_EQ(t.attitude[0].at(p.pulse_interval + p.pulse_width).d, 0.0);
}

TEST(Imu, DisconnectZeroesEverythingAndIsUnhealthy) {
  const auto t = imu_fault_params(FaultMode::ImuDisconnect);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(t.attitude[a].gain, 0.0);
    EXPECT_EQ(t.rates[a].gain, 0.0);
    EXPECT_EQ(t.attitude[a].at(3.0).d, 0.0);
  }
  EXPECT_EQ(t.specific_force.gain, 0.0);
  EXPECT_FALSE(t.healthy);
}

TEST(Servo, TemplatesFollowCatalogue) {
  const auto loose = servo_fault_params(FaultMode::ServoLoose);
  EXPECT_EQ(loose.gain, 0.9);
  EXPECT_GT(loose.wander_sigma, 0.0);
  const auto stuck = servo_fault_params(FaultMode::ServoStuck);
  EXPECT_EQ(stuck.gain, 0.0);
  EXPECT_TRUE(stuck.latch_at_onset);
  const auto st = stuck.at(0, 5.0, deg2rad(4.0), 0.0);
  EXPECT_EQ(st.k, 0.0);
  EXPECT_EQ(st.d, deg2rad(4.0));
  const auto dmg = servo_fault_params(FaultMode::ServoDamage).at(1, 1.0, 0.0, 0.0);
  EXPECT_EQ(dmg.k, 0.8);
  EXPECT_EQ(dmg.d, 0.0);
}

TEST(Servo, JitterAlternates) {
  const auto j = servo_fault_params(FaultMode::ServoJitter);
  EXPECT_TRUE(j.jitter_faulted(0.0));
  EXPECT_TRUE(j.jitter_faulted(0.19));
  EXPECT_FALSE(j.jitter_faulted(0.2));
  EXPECT_FALSE(j.jitter_faulted(0.39));
  EXPECT_TRUE(j.jitter_faulted(0.4));
  EXPECT_EQ(j.at(0, 0.1, 0.0, 0.0).k, 0.0);
  EXPECT_EQ(j.at(0, 0.3, 0.0, 0.0).k, 1.0);
}

TEST(Servo, UnselectedChannelUntouched) {
  auto p = default_params(FaultMode::ServoDamage);
  p.axes = {true, false, false};
  const auto t = servo_fault_params(FaultMode::ServoDamage, p);
  const auto s = t.at(1, 1.0, 0.0, 0.0);
  EXPECT_EQ(s.k, 1.0);
  EXPECT_EQ(s.d, 0.0);
}

TEST(Validation, RejectsWrongPatterns) {
  auto p = default_params(FaultMode::ImuMultiplicative);
  p.gain = 1.0;
  EXPECT_THROW(validate_params(FaultMode::ImuMultiplicative, p), ConstraintError);

  p = default_params(FaultMode::ImuConstantDeviation);
  p.gain = 1.1;
  EXPECT_THROW(validate_params(FaultMode::ImuConstantDeviation, p), ConstraintError);

  p = default_params(FaultMode::ServoStuck);
  p.gain = 0.5;
  EXPECT_THROW(validate_params(FaultMode::ServoStuck, p), ConstraintError);

  p = default_params(FaultMode::ServoDamage);
  p.gain = 1.0;
  EXPECT_THROW(validate_params(FaultMode::ServoDamage, p), ConstraintError);

  p = default_params(FaultMode::ServoConstantDeviation);
  p.bias = {0.0, 0.0, 0.0};
  EXPECT_THROW(validate_params(FaultMode::ServoConstantDeviation, p), ConstraintError);

  p = default_params(FaultMode::ServoJitter);
  p.jitter_off = 0.0;
  EXPECT_THROW(validate_params(FaultMode::ServoJitter, p), ConstraintError);

  p = default_params(FaultMode::ImuDrift);
  p.axes = {false, false, false};
  EXPECT_THROW(validate_params(FaultMode::ImuDrift, p), ConstraintError);

  p = default_params(FaultMode::GpsDeception);
  p.position_offset = std::nan("");
  EXPECT_THROW(validate_params(FaultMode::GpsDeception, p), ConstraintError);
}

TEST(Validation, SpecTiming) {
  EXPECT_THROW(validate(spec_at(FaultMode::ServoStuck, -1.0)), ConstraintError);
  EXPECT_THROW(validate(spec_at(FaultMode::ServoStuck, 5.0, 0.0)), ConstraintError);
  FaultSpec unresolved;
  unresolved.params = default_params(unresolved.mode);
  EXPECT_THROW(validate(unresolved), ConstraintError);
  unresolved.anchor = PhaseAnchor{Phase::LevelFlight, 30.0};
  EXPECT_NO_THROW(validate(unresolved));
}

TEST(Schedule, EmptyIsNeverActive) {
  const FaultSchedule s;
  for (double t : {0.0, 1.0, 1e6}) EXPECT_TRUE(schedule_active(s, t).empty());
}

TEST(Schedule, HalfOpenInterval) {
  const FaultSchedule s({spec_at(FaultMode::GpsInterruption, 100.0)});
  EXPECT_TRUE(schedule_active(s, std::nextafter(100.0, 0.0)).empty());
  EXPECT_EQ(schedule_active(s, 100.0).size(), 1u);
  EXPECT_EQ(schedule_active(s, 1e9).size(), 1u);

  const FaultSchedule f({spec_at(FaultMode::ServoDamage, 10.0, 5.0)});
  EXPECT_EQ(schedule_active(f, 14.999).size(), 1u);
  EXPECT_TRUE(schedule_active(f, 15.0).empty());
}

TEST(Schedule, DisjointSpecsOnSameChannel) {
  const FaultSchedule s({spec_at(FaultMode::ServoDamage, 10.0, 5.0), spec_at(FaultMode::ServoStuck, 15.0, 5.0)});
  EXPECT_EQ(schedule_active(s, 12.0), std::vector<std::size_t>{0});
  EXPECT_EQ(schedule_active(s, 15.0), std::vector<std::size_t>{1});
  EXPECT_TRUE(schedule_active(s, 20.0).empty());
}

TEST(Schedule, DifferentChannelsMayOverlap) {
  const FaultSchedule s({spec_at(FaultMode::GpsDeception, 10.0), spec_at(FaultMode::ServoDamage, 10.0)});
  EXPECT_EQ(schedule_active(s, 11.0).size(), 2u);
}

TEST(Schedule, OverlapOnSameChannelRejected) {
  EXPECT_THROW(FaultSchedule({spec_at(FaultMode::ServoDamage, 10.0, 10.0), spec_at(FaultMode::ServoStuck, 15.0)}),
               ConstraintError);
  EXPECT_THROW(FaultSchedule({spec_at(FaultMode::GpsDeception, 0.0), spec_at(FaultMode::GpsWeakSignal, 50.0)}),
               ConstraintError);
}

TEST(Schedule, AnchoredSpecResolvesOnPhaseEntry) {
  FaultSpec s;
  s.mode = FaultMode::GpsDeception;
  s.params = default_params(s.mode);
  s.anchor = PhaseAnchor{Phase::LevelFlight, 30.0};
  FaultSchedule sched({s});
  EXPECT_TRUE(schedule_active(sched, 1e6).empty());
  sched.resolve_phase_entry(Phase::Climb, 5.0);
  EXPECT_FALSE(sched.specs()[0].start.has_value());
  sched.resolve_phase_entry(Phase::LevelFlight, 106.0);
  ASSERT_TRUE(sched.specs()[0].start.has_value());
  EXPECT_EQ(*sched.specs()[0].start, 136.0);
  sched.resolve_phase_entry(Phase::LevelFlight, 500.0);
  EXPECT_EQ(*sched.specs()[0].start, 136.0);
}

TEST(Injector, StuckLatchesActualAtOnset) {
  FaultInjector inj(FaultSchedule({spec_at(FaultMode::ServoStuck, 1.0)}), 1);
  const SurfaceActual before{0.01, 0.02, 0.03, 0.5};
  const SurfaceActual at_onset{deg2rad(4.0), -0.02, 0.01, 0.6};
  inj.update(0.99, 0.01, before);
  EXPECT_TRUE(inj.active().empty());
  EXPECT_EQ(inj.labels(), "");
  inj.update(1.0, 0.01, at_onset);
  EXPECT_EQ(inj.labels(), std::string(mode_name(FaultMode::ServoStuck)));
  for (int i = 1; i < 100; ++i) {
    inj.update(1.0 + i * 0.01, 0.01, SurfaceActual{0.3, 0.3, 0.3, 0.9});
    const auto out = inj.apply_actuators({0.2 * i, -0.1, 0.05, 0.7}, 1.0 + i * 0.01);
    ASSERT_EQ(out.elevator, at_onset.elevator);
    ASSERT_EQ(out.aileron, at_onset.aileron);
    ASSERT_EQ(out.rudder, at_onset.rudder);
    ASSERT_EQ(out.throttle, 0.7);
  }
}

TEST(Injector, ImuDisconnectMarksUnhealthy) {
  FaultInjector inj(FaultSchedule({spec_at(FaultMode::ImuDisconnect, 2.0)}), 1);
  avionics::ImuReading r;
  r.attitude = {0.1, 0.2, 0.3};
  r.rates = flightdyn::Vec3(0.1, 0.1, 0.1);
  inj.update(1.0, 0.01, {});
  EXPECT_TRUE(inj.apply_imu(r, 1.0).healthy);
  inj.update(2.0, 0.01, {});
  const auto f = inj.apply_imu(r, 2.0);
  EXPECT_FALSE(f.healthy);
  EXPECT_EQ(f.attitude.roll, 0.0);
  EXPECT_EQ(f.rates.norm(), 0.0);
}

TEST(Injector, LooseWanderIsSeedDeterministic) {
  auto run = [](std::uint64_t seed) {
    FaultInjector inj(FaultSchedule({spec_at(FaultMode::ServoLoose, 0.0)}), seed);
    std::vector<double> out;
    for (int i = 0; i < 200; ++i) {
      inj.update(i * 0.01, 0.01, {});
      out.push_back(inj.apply_actuators({0.1, 0.1, 0.1, 0.5}, i * 0.01).elevator);
    }
    return out;
  };
  EXPECT_EQ(run(9), run(9));
  EXPECT_NE(run(9), run(10));
  const auto a = run(9);
  EXPECT_NEAR(a.front(), 0.9 * 0.1, 1e-15);
}

TEST(FaultSpecs, ChannelsAndDescribe) {
  auto s = spec_at(FaultMode::ImuMultiplicative, 3.0);
  EXPECT_EQ(s.channels(), (std::vector<std::string>{"imu.x", "imu.z"}));
  EXPECT_EQ(spec_at(FaultMode::GpsDeception, 0.0).channels(), std::vector<std::string>{"gps"});
  EXPECT_EQ(spec_at(FaultMode::ImuDisconnect, 0.0).channels().size(), 3u);
  EXPECT_NE(s.describe().find(std::string(mode_name(s.mode))), std::string::npos);
}
