#pragma once

#include <cstdint>
#include <random>

namespace uavlab::avionics {

using RngStream = std::mt19937_64;

/// Independent named streams derived from one run seed.
enum class StreamId : std::uint64_t { Imu = 1, Gps = 2, AirData = 3, ServoWander = 4 };

inline RngStream make_stream(std::uint64_t seed, StreamId id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), 0x5eedu};
  return RngStream(seq);
}

/// Zero-mean Gaussian sample; returns exactly 0 without touching the stream
/// when sigma is 0.
inline double gaussian(RngStream& rng, double sigma) {
  if (sigma == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

}  // namespace uavlab::avionics
