#include <gtest/gtest.h>

#include "properties.hpp"

using namespace uavlab::testing;

namespace {

constexpr std::size_t kCases = 1000;

void expect_ok(const PropertyResult& r) {
  EXPECT_GE(r.cases, kCases) << r.name;
  EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.detail << " (worst " << r.worst << ")";
}

}  // namespace

TEST(Properties, FaultAlgebra) { expect_ok(check_fault_algebra(kCases * 14, 11)); }
TEST(Properties, QuaternionNorm) { expect_ok(check_quaternion_norm(kCases, 12)); }
TEST(Properties, CommandClamping) { expect_ok(check_command_clamping(kCases, 13)); }
TEST(Properties, StuckLatch) { expect_ok(check_stuck_latch(kCases, 14)); }
TEST(Properties, LabelFidelity) { expect_ok(check_label_fidelity(kCases, 15)); }
TEST(Properties, EnergyMonotonic) { expect_ok(check_energy_monotonic(kCases, 16)); }
TEST(Properties, ServoLimits) { expect_ok(check_servo_limits(kCases, 17)); }
TEST(Properties, JitterPeriodicity) { expect_ok(check_jitter_periodicity(kCases, 18)); }

TEST(Properties, SeedsAreReproducible) {
  const auto a = check_quaternion_norm(50, 99);
  const auto b = check_quaternion_norm(50, 99);
  EXPECT_EQ(a.worst, b.worst);
}
