#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "uavlab/avionics/navigation.hpp"
#include "uavlab/avionics/rng.hpp"
#include "uavlab/avionics/sensors.hpp"
#include "uavlab/avionics/servo.hpp"
#include "uavlab/flightdyn/state.hpp"

using namespace uavlab;
using namespace uavlab::avionics;

namespace {

RigidBodyState sample_state() {
  RigidBodyState s;
  s.time = 12.34;
  s.position_ned = Vec3(1500.0, -250.0, -400.0);
  s.velocity_body = Vec3(39.0, 0.5, 1.2);
  s.attitude = flightdyn::quaternion_from_euler({0.1, 0.05, 1.2});
  s.angular_rates = Vec3(0.01, -0.02, 0.03);
  return s;
}

}  // namespace

TEST(Imu, ZeroNoiseIsTruth) {
  ImuNoise none{0.0, 0.0, 0.0};
  auto rng = make_stream(1, StreamId::Imu);
  const TruthSample truth{sample_state(), Vec3(0.3, -0.1, -9.7)};
  const ImuReading r = imu_measure(truth, none, rng);
  const auto e = truth.state.euler();
  EXPECT_EQ(r.attitude.roll, e.roll);
  EXPECT_EQ(r.attitude.pitch, e.pitch);
  EXPECT_EQ(r.attitude.yaw, e.yaw);
  EXPECT_EQ(r.rates, truth.state.angular_rates);
  EXPECT_EQ(r.specific_force, truth.specific_force);
  EXPECT_TRUE(r.healthy);
  EXPECT_EQ(r.time, truth.state.time);
}

TEST(Imu, SameSeedSameSequence) {
  const TruthSample truth{sample_state(), Vec3(0, 0, -9.81)};
  auto a = make_stream(42, StreamId::Imu);
  auto b = make_stream(42, StreamId::Imu);
  for (int i = 0; i < 1000; ++i) {
    const auto ra = imu_measure(truth, {}, a);
    const auto rb = imu_measure(truth, {}, b);
    ASSERT_EQ(ra.attitude.roll, rb.attitude.roll);
    ASSERT_EQ(ra.rates, rb.rates);
    ASSERT_EQ(ra.specific_force, rb.specific_force);
  }
}

TEST(Imu, NoiseMeanWithinThreeSigmaOverRootN) {
  const TruthSample truth{sample_state(), Vec3(0, 0, -9.81)};
  const ImuNoise noise;  // 0.05 deg attitude
  auto rng = make_stream(7, StreamId::Imu);
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += imu_measure(truth, noise, rng).attitude.roll;
  const double bound = 3.0 * noise.attitude_sigma / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(sum / n, truth.state.euler().roll, bound);
  EXPECT_NEAR(noise.attitude_sigma, deg2rad(0.05), 1e-15);
}

TEST(Imu, StreamsAreIndependent) {
  auto a = make_stream(42, StreamId::Imu);
  auto b = make_stream(42, StreamId::Gps);
  EXPECT_NE(a(), b());
}

TEST(Gps, OriginMapsToOrigin) {
  GpsNoise none;
  none.horizontal_sigma = none.vertical_sigma = none.speed_sigma = 0.0;
  auto rng = make_stream(1, StreamId::Gps);
  RigidBodyState s;
  s.position_ned = Vec3(0, 0, -100.0);
  const GeoOrigin origin{34.0, 108.0};
  const auto r = gps_measure(s, origin, none, rng);
  EXPECT_EQ(r.latitude, 34.0);
  EXPECT_EQ(r.longitude, 108.0);
  EXPECT_EQ(r.altitude, 100.0);
}

TEST(Gps, OneDegreeNorth) {
  GpsNoise none;
  none.horizontal_sigma = none.vertical_sigma = none.speed_sigma = 0.0;
  auto rng = make_stream(1, StreamId::Gps);
  RigidBodyState s;
  s.position_ned = Vec3(111320.0, 0.0, -100.0);
  const auto r = gps_measure(s, {34.0, 108.0}, none, rng);
  EXPECT_NEAR(r.latitude, 35.0, 1e-12);
  EXPECT_NEAR(r.longitude, 108.0, 1e-12);
}

TEST(Gps, DefaultStreamHasFifteenSatellites) {
  auto rng = make_stream(1, StreamId::Gps);
  const auto r = gps_measure(sample_state(), {}, GpsNoise{}, rng);
  EXPECT_EQ(r.satellites, 15);
  EXPECT_TRUE(r.fix_valid);
  EXPECT_TRUE(r.received);
}

TEST(Gps, GeodeticRoundTrip) {
  const GeoOrigin o{34.0, 108.0};
  for (double n : {-5000.0, 0.0, 1234.5}) {
    for (double e : {-800.0, 0.0, 9000.0}) {
      const auto [lat, lon] = ned_to_geodetic(n, e, o);
      const auto [n2, e2] = geodetic_to_ned(lat, lon, o);
      EXPECT_NEAR(n2, n, 1e-6);
      EXPECT_NEAR(e2, e, 1e-6);
    }
  }
  // 0.05 deg of latitude is about 5.5 km.
  EXPECT_NEAR(geodetic_to_ned(34.05, 108.0, o).first, 5566.0, 1.0);
}

TEST(DeadReckoning, PerfectImuZeroAccelerationHoldsPosition) {
  NavSolution nav;
  nav.position_ned = Vec3(10, 20, -300);
  ImuReading imu;
  imu.specific_force = Vec3(0, 0, -kGravity);  // level, supporting weight
  for (int i = 0; i < 1000; ++i) nav = dead_reckon(nav, imu, 0.01);
  EXPECT_NEAR((nav.position_ned - Vec3(10, 20, -300)).norm(), 0.0, 1e-9);
  EXPECT_EQ(nav.source, NavSource::DeadReckoning);
}

TEST(DeadReckoning, AccelerationBiasGrowsQuadratically) {
  const double b = 0.05;
  const double T = 30.0;
  const double dt = 0.01;
  NavSolution truth_nav, dr;
  ImuReading clean, biased;
  clean.specific_force = Vec3(0, 0, -kGravity);
  biased.specific_force = Vec3(b, 0, -kGravity);
  for (int i = 0; i < static_cast<int>(T / dt); ++i) {
    truth_nav = dead_reckon(truth_nav, clean, dt);
    dr = dead_reckon(dr, biased, dt);
  }
  const double err = (dr.position_ned - truth_nav.position_ned).norm();
  EXPECT_NEAR(err, 0.5 * b * T * T, 0.01 * 0.5 * b * T * T);
}

TEST(DeadReckoning, NoiseErrorVarianceGrowsWithTime) {
  // Monte-Carlo over independent noise streams.
  const int runs = 400;
  const double dt = 0.01;
  const std::vector<int> checkpoints{100, 500, 1000, 2000};
  std::vector<double> var(checkpoints.size(), 0.0);
  for (int r = 0; r < runs; ++r) {
    auto rng = make_stream(static_cast<std::uint64_t>(r), StreamId::Imu);
    NavSolution nav;
    std::size_t next = 0;
    for (int i = 1; i <= checkpoints.back(); ++i) {
      ImuReading imu;
      imu.specific_force = Vec3(gaussian(rng, 0.02), gaussian(rng, 0.02), -kGravity + gaussian(rng, 0.02));
      nav = dead_reckon(nav, imu, dt);
      if (i == checkpoints[next]) {
        var[next] += nav.position_ned.squaredNorm() / runs;
        ++next;
      }
    }
  }
  for (std::size_t i = 1; i < var.size(); ++i) EXPECT_GE(var[i], var[i - 1]);
}

TEST(Servo, HeldCommandConverges) {
  ServoState s;
  const ControlCommand cmd{deg2rad(10.0), deg2rad(-7.0), deg2rad(3.0), 0.6};
  for (int i = 0; i < 1000; ++i) servo_dynamics(cmd, s, 0.01);
  EXPECT_NEAR(s.actual.elevator, cmd.elevator, 1e-4);
  EXPECT_NEAR(s.actual.aileron, cmd.aileron, 1e-4);
  EXPECT_NEAR(s.actual.rudder, cmd.rudder, 1e-4);
  EXPECT_NEAR(s.actual.throttle, cmd.throttle, 1e-4);
}

TEST(Servo, StepReachesSixtyThreePercentAtTimeConstant) {
  const ServoConfig cfg;  // 50 ms, slow enough step stays below the rate limit
  ServoState s;
  const double step = deg2rad(4.0);
  const double dt = 0.001;
  double t = 0.0;
  double t63 = -1.0;
  while (t < 0.5) {
    servo_dynamics({step, 0.0, 0.0, 0.0}, s, dt, cfg);
    t += dt;
    if (t63 < 0.0 && s.actual.elevator >= (1.0 - std::exp(-1.0)) * step) t63 = t;
  }
  EXPECT_NEAR(t63, cfg.time_constant, 0.05 * cfg.time_constant);
}

TEST(Servo, LagIsIndependentOfStepSize) {
  ServoState a, b;
  const ControlCommand cmd{deg2rad(5.0), 0.0, 0.0, 0.0};
  for (int i = 0; i < 100; ++i) servo_dynamics(cmd, a, 0.001);
  servo_dynamics(cmd, b, 0.1);
  EXPECT_NEAR(a.actual.elevator, b.actual.elevator, 1e-12);
}

TEST(Servo, ClampsAtPositionLimit) {
  ServoState t;
  for (int i = 0; i < 2000; ++i) {
    servo_dynamics({deg2rad(40.0), -deg2rad(40.0), 0.0, 2.0}, t, 0.01);
    ASSERT_LE(std::abs(t.actual.elevator), deg2rad(25.0));
    ASSERT_LE(std::abs(t.actual.aileron), deg2rad(25.0));
  }
  EXPECT_NEAR(t.actual.elevator, deg2rad(25.0), 1e-12);
  EXPECT_NEAR(t.actual.aileron, -deg2rad(25.0), 1e-12);
  EXPECT_LE(t.actual.throttle, 1.0);
}

TEST(Servo, RateLimited) {
  ServoConfig cfg;
  cfg.time_constant = 1e-4;  // lag effectively instantaneous
  ServoState s;
  servo_dynamics({deg2rad(20.0), 0.0, 0.0, 0.0}, s, 0.01, cfg);
  EXPECT_NEAR(s.actual.elevator, cfg.rate_limit * 0.01, 1e-12);
}

TEST(GpsIntegrity, JumpInvalidatesAfterLatency) {
  const GeoOrigin o;
  GpsIntegrityMonitor m(o);
  GpsReading r;
  r.latitude = o.latitude;
  r.longitude = o.longitude;
  r.satellites = 15;
  r.fix_valid = true;
  EXPECT_TRUE(m.update(true, r, 0.0));
  r.latitude += 0.05;
  r.longitude += 0.05;
  EXPECT_TRUE(m.update(true, r, 0.1));
  EXPECT_EQ(m.jump_detected_at(), 0.1);
  EXPECT_TRUE(m.update(false, std::nullopt, 0.6));
  EXPECT_FALSE(m.update(false, std::nullopt, 1.1));
  // Latched even though later fixes look consistent.
  EXPECT_FALSE(m.update(true, r, 5.0));
}

TEST(GpsIntegrity, SatelliteThreshold) {
  GpsIntegrityMonitor m(GeoOrigin{});
  GpsReading r;
  r.latitude = 34.0;
  r.longitude = 108.0;
  r.fix_valid = true;
  r.satellites = 12;
  EXPECT_TRUE(m.update(true, r, 0.0));
  r.satellites = 7;
  EXPECT_FALSE(m.update(true, r, 0.1));
  r.satellites = 15;
  EXPECT_TRUE(m.update(true, r, 0.2));
}

TEST(GpsIntegrity, MissingEpochInvalid) {
  GpsIntegrityMonitor m(GeoOrigin{});
  EXPECT_FALSE(m.update(true, std::nullopt, 0.0));
  GpsReading r;
  r.received = false;
  EXPECT_FALSE(m.update(true, r, 0.1));
}

TEST(ImuHealth, ReportedFailureLatches) {
  ImuHealthMonitor m;
  ImuReading r;
  EXPECT_TRUE(m.update(r, 0.01));
  r.healthy = false;
  EXPECT_FALSE(m.update(r, 0.01));
  r.healthy = true;
  EXPECT_FALSE(m.update(r, 0.01));
}

TEST(ImuHealth, ConsistentRatesStayHealthy) {
  ImuHealthMonitor m;
  ImuReading r;
  const double p = deg2rad(5.0);
  for (int i = 0; i < 2000; ++i) {
    r.attitude.roll = p * i * 0.01;
    r.rates = Vec3(p, 0, 0);
    ASSERT_TRUE(m.update(r, 0.01));
    if (r.attitude.roll > 0.5) break;
  }
}

TEST(ImuHealth, AttitudeWithoutRateFlagsUnhealthy) {
  ImuHealthMonitor m;
  ImuReading r;
  bool healthy = true;
  for (int i = 0; i < 3000 && healthy; ++i) {
    r.attitude.roll = deg2rad(0.5) * i * 0.01;  // drifts while the gyro reads zero
    healthy = m.update(r, 0.01);
  }
  EXPECT_FALSE(healthy);
}

TEST(Navigation, NoiselessChainIsIdentity) {
  const RigidBodyState s = sample_state();
  const NavSolution nav = nav_from_truth(s);
  EXPECT_EQ(nav.position_ned, s.position_ned);
  EXPECT_NEAR((nav.velocity_ned - s.velocity_ned()).norm(), 0.0, 1e-12);
  EXPECT_NEAR(nav.airspeed, s.airspeed(), 1e-12);
  EXPECT_EQ(nav.source, NavSource::Gps);

  GpsNoise none;
  none.horizontal_sigma = none.vertical_sigma = none.speed_sigma = 0.0;
  auto rng = make_stream(3, StreamId::Gps);
  const GeoOrigin o;
  const auto g = gps_measure(s, o, none, rng);
  const auto [n, e] = geodetic_to_ned(g.latitude, g.longitude, o);
  EXPECT_NEAR(n, s.position_ned.x(), 1e-9);
  EXPECT_NEAR(e, s.position_ned.y(), 1e-9);
  EXPECT_NEAR(g.altitude, s.altitude(), 1e-9);
}
