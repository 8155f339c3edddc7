#pragma once

#include <optional>
#include <string_view>

namespace uavlab {

/// Mission phases in flight order.
enum class Phase { Climb, LevelFlight, GlideSlope, Attack };

constexpr std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::Climb: return "climb";
    case Phase::LevelFlight: return "level_flight";
    case Phase::GlideSlope: return "glide_slope";
    case Phase::Attack: return "attack";
  }
  return "unknown";
}

constexpr std::optional<Phase> parse_phase(std::string_view s) {
  for (Phase p : {Phase::Climb, Phase::LevelFlight, Phase::GlideSlope, Phase::Attack}) {
    if (phase_name(p) == s) return p;
  }
  return std::nullopt;
}

}  // namespace uavlab
