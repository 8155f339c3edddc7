#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavlab/damage/features.hpp"
#include "uavlab/faultlab/modes.hpp"

namespace uavlab::damage {

enum class MissionImpact { None, Degraded, Failed };
enum class PlatformDamage { None, Minor, Delayed, Destroyed };
enum class Capability { CanAttack, CannotAttack };

std::string_view mission_impact_name(MissionImpact v);
std::string_view platform_damage_name(PlatformDamage v);
std::string_view capability_name(Capability v);
std::optional<MissionImpact> parse_mission_impact(std::string_view s);
std::optional<PlatformDamage> parse_platform_damage(std::string_view s);
std::optional<Capability> parse_capability(std::string_view s);

enum class Comparison { Greater, GreaterEqual, Less, LessEqual, AbsGreater, AbsLess };

/// `feature op value`, evaluated on one window.
struct Predicate {
  std::string feature;
  Comparison op = Comparison::Greater;
  double value = 0.0;

  bool holds(const FeatureVector& f) const;
};

struct Verdict {
  MissionImpact mission = MissionImpact::None;
  PlatformDamage platform = PlatformDamage::None;
  Capability capability = Capability::CanAttack;
  std::string trend;
  bool fallback_glide = false;  // report a forward-glide estimate
};

/// Fires when every predicate holds together in at least `min_windows`
/// analysed windows.
struct Rule {
  std::string name;
  faultlab::FaultLocation location = faultlab::FaultLocation::None;
  std::optional<faultlab::FaultMode> mode;
  std::vector<Predicate> when;
  int min_windows = 1;
  Verdict verdict;
};

struct OnsetConfig {
  double baseline = 20.0;  // s of telemetry used as the reference
  double factor = 5.0;     // deviation, in baseline standard deviations
};

/// Ordered rules; the first one that fires decides.
struct RuleBase {
  std::string name = "rules";
  std::vector<Phase> exclude_phases;  // windows ending in these phases are ignored
  OnsetConfig onset;
  std::vector<Rule> rules;
  Verdict nominal;  // verdict when no rule fires

  /// Throws ConstraintError for unknown features, empty rules or an
  /// inconsistent location/mode pair.
  void validate() const;
};

/// Calibrated on the standard campaign.
RuleBase default_rule_base();
RuleBase parse_rule_base(const std::string& text);
RuleBase load_rule_base(const std::filesystem::path& path);
std::string rule_base_to_json(const RuleBase& rules);

struct DamageReport {
  faultlab::FaultLocation location = faultlab::FaultLocation::None;
  std::optional<faultlab::FaultMode> mode;
  std::string rule;  // name of the rule that fired, empty for none
  std::optional<double> onset;  // s
  MissionImpact mission = MissionImpact::None;
  PlatformDamage platform = PlatformDamage::None;
  std::string trend;
  Capability capability = Capability::CanAttack;
  std::optional<double> glide_distance_km;
  bool fallback_glide = false;
};

/// Applies the rule base to a window sequence. Reads nothing but the
/// features. Onset is the start of the unbroken run of windows, ending at
/// the rule's first hit, in which a feature used by the firing rule sits
/// outside its baseline band.
DamageReport classify(std::span<const FeatureVector> features, const RuleBase& rules);

}  // namespace uavlab::damage
