#include "uavlab/damage/rules.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "../common/json_reader.hpp"
#include "uavlab/common/error.hpp"

namespace uavlab::damage {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::pair<Comparison, std::string_view> kComparisons[] = {
    {Comparison::Greater, ">"},       {Comparison::GreaterEqual, ">="}, {Comparison::Less, "<"},
    {Comparison::LessEqual, "<="},    {Comparison::AbsGreater, "abs>"}, {Comparison::AbsLess, "abs<"},
};

std::string_view comparison_name(Comparison c) {
  for (const auto& [k, n] : kComparisons) {
    if (k == c) return n;
  }
  return ">";
}

std::optional<Comparison> parse_comparison(std::string_view s) {
  for (const auto& [k, n] : kComparisons) {
    if (n == s) return k;
  }
  return std::nullopt;
}

// Shipped rule base. Thresholds come from the standard campaign: each sits
// well outside the range seen on control runs.
constexpr const char* kDefaultRules = R"json({
  "name": "default",
  "exclude_phases": ["attack"],
  "onset": {"baseline_s": 20.0, "factor": 5.0},
  "nominal": {
    "mission_impact": "none", "platform_damage": "none", "residual_capability": "can_attack",
    "trend": "no abnormal behaviour; the mission proceeds as planned"
  },
  "rules": [
    {
      "name": "imu_stream_lost",
      "location": "imu", "mode": "imu_disconnect",
      "when": [{"feature": "imu_zero_fraction", "op": ">", "value": 0.5}],
      "min_windows": 1,
      "verdict": {
        "mission_impact": "failed", "platform_damage": "destroyed", "residual_capability": "cannot_attack",
        "trend": "attitude and rate feedback absent; surfaces held at their last values with the throttle cut; the aircraft noses down and rolls away until ground impact"
      }
    },
    {
      "name": "gps_stream_lost",
      "location": "gps", "mode": "gps_interruption",
      "when": [{"feature": "gps_received_fraction", "op": "<", "value": 0.5}],
      "min_windows": 1,
      "verdict": {
        "mission_impact": "degraded", "platform_damage": "minor", "residual_capability": "can_attack",
        "trend": "no position messages; inertial positioning until the divergence window expires, then a 3 deg pitch-hold glide with zero throttle to touchdown",
        "fallback_glide": true
      }
    },
    {
      "name": "gps_position_jump",
      "location": "gps", "mode": "gps_deception",
      "when": [{"feature": "position_jump", "op": ">", "value": 500.0}],
      "min_windows": 1,
      "verdict": {
        "mission_impact": "degraded", "platform_damage": "minor", "residual_capability": "can_attack",
        "trend": "position solution displaced by kilometres; roll oscillates while the fix is rejected; throttle reset to zero and the aircraft glides forward at 3 deg pitch until touchdown",
        "fallback_glide": true
      }
    },
    {
      "name": "gps_satellites_below_validity",
      "location": "gps", "mode": "gps_weaker_signal",
      "when": [{"feature": "gps_satellites_min", "op": "<", "value": 8.0},
               {"feature": "gps_received_fraction", "op": ">=", "value": 0.5}],
      "min_windows": 1,
      "verdict": {
        "mission_impact": "degraded", "platform_damage": "minor", "residual_capability": "can_attack",
        "trend": "satellite count below the validity threshold; inertial positioning, then a zero-throttle fallback glide to touchdown",
        "fallback_glide": true
      }
    },
    {
      "name": "gps_satellites_reduced",
      "location": "gps", "mode": "gps_weak_signal",
      "when": [{"feature": "gps_satellites_min", "op": "<", "value": 14.0},
               {"feature": "gps_satellites_min", "op": ">=", "value": 8.0}],
      "min_windows": 2,
      "verdict": {
        "mission_impact": "none", "platform_damage": "none", "residual_capability": "can_attack",
        "trend": "fewer satellites tracked but the fix stays valid; flight control unaffected"
      }
    },
    {
      "name": "surfaces_frozen",
      "location": "actuator", "mode": "servo_stuck",
      "when": [{"feature": "surface_stuck", "op": ">", "value": 0.5}],
      "min_windows": 2,
      "verdict": {
        "mission_impact": "failed", "platform_damage": "destroyed", "residual_capability": "cannot_attack",
        "trend": "surfaces frozen while commands saturate; attitude diverges, the nose drops and airspeed builds until ground impact"
      }
    },
    {
      "name": "commands_frozen",
      "location": "imu", "mode": "imu_drift",
      "when": [{"feature": "command_frozen", "op": ">", "value": 0.5}],
      "min_windows": 2,
      "verdict": {
        "mission_impact": "failed", "platform_damage": "destroyed", "residual_capability": "cannot_attack",
        "trend": "measured attitude drifts until the IMU is declared unhealthy; surfaces then hold their last values with the throttle cut and the aircraft descends in a slow turn"
      }
    },
    {
      "name": "servo_intermittent",
      "location": "actuator", "mode": "servo_jitter",
      "when": [{"feature": "pitch_burr", "op": ">", "value": 0.11},
               {"feature": "elevator_residual_std", "op": ">", "value": 5.0}],
      "min_windows": 3,
      "verdict": {
        "mission_impact": "none", "platform_damage": "none", "residual_capability": "can_attack",
        "trend": "burrs on the pitch trace from intermittent servo drop-outs; airspeed and altitude unaffected"
      }
    },
    {
      "name": "servo_offset",
      "location": "actuator", "mode": "servo_constant_deviation",
      "when": [{"feature": "rudder_residual_mean", "op": "abs>", "value": 1.0},
               {"feature": "rudder_residual_std", "op": "<", "value": 0.3},
               {"feature": "aileron_residual_mean", "op": "abs>", "value": 1.0}],
      "min_windows": 3,
      "verdict": {
        "mission_impact": "none", "platform_damage": "none", "residual_capability": "can_attack",
        "trend": "constant surface offset absorbed by the control loops; small attitude change, airspeed unaffected"
      }
    },
    {
      "name": "servo_wander",
      "location": "actuator", "mode": "servo_loose",
      "when": [{"feature": "rudder_residual_std", "op": ">", "value": 0.5}],
      "min_windows": 3,
      "verdict": {
        "mission_impact": "none", "platform_damage": "minor", "residual_capability": "can_attack",
        "trend": "surfaces fall short of and wander around the command; pitch fluctuates up and down while the attitude stays bounded"
      }
    },
    {
      "name": "servo_reduced_gain",
      "location": "actuator", "mode": "servo_damage",
      "when": [{"feature": "elevator_gain", "op": ">", "value": 0.6},
               {"feature": "elevator_gain", "op": "<", "value": 0.95},
               {"feature": "elevator_residual_std", "op": "<", "value": 0.3},
               {"feature": "rudder_residual_std", "op": "<", "value": 0.3}],
      "min_windows": 3,
      "verdict": {
        "mission_impact": "none", "platform_damage": "minor", "residual_capability": "can_attack",
        "trend": "surfaces reach only part of the commanded deflection; the loops compensate and the attitude stays steady"
      }
    },
    {
      "name": "imu_attitude_pulses",
      "location": "imu", "mode": "imu_transient_drift",
      "when": [{"feature": "p_range", "op": ">", "value": 8.0},
               {"feature": "roll_range", "op": ">", "value": 2.0}],
      "min_windows": 4,
      "verdict": {
        "mission_impact": "degraded", "platform_damage": "none", "residual_capability": "can_attack",
        "trend": "sudden short-lived jumps in measured attitude and rate; airspeed rises then falls while the throttle dips and recovers"
      }
    },
    {
      "name": "imu_attitude_bias",
      "location": "imu", "mode": "imu_constant_deviation",
      "when": [{"feature": "bank_residual", "op": "abs>", "value": 2.0},
               {"feature": "heading_residual", "op": "abs>", "value": 3.0}],
      "min_windows": 3,
      "verdict": {
        "mission_impact": "none", "platform_damage": "none", "residual_capability": "can_attack",
        "trend": "measured roll and heading offset from the GPS track by a constant; flight control unaffected"
      }
    },
    {
      "name": "imu_heading_scaled",
      "location": "imu", "mode": "imu_multiplicative",
      "when": [{"feature": "heading_residual", "op": "abs>", "value": 8.0},
               {"feature": "bank_residual", "op": "abs<", "value": 1.0}],
      "min_windows": 3,
      "verdict": {
        "mission_impact": "none", "platform_damage": "none", "residual_capability": "can_attack",
        "trend": "measured heading scaled away from the GPS track; attitude control unaffected"
      }
    }
  ]
})json";

Verdict parse_verdict(const JsonNode& n) {
  n.expect_object();
  n.only({"mission_impact", "platform_damage", "residual_capability", "trend", "fallback_glide"});
  Verdict v;
  const auto mi = parse_mission_impact(n.string("mission_impact", "none"));
  if (!mi) n.fail_member("mission_impact", "expected none, degraded or failed");
  const auto pd = parse_platform_damage(n.string("platform_damage", "none"));
  if (!pd) n.fail_member("platform_damage", "expected none, minor, delayed or destroyed");
  const auto rc = parse_capability(n.string("residual_capability", "can_attack"));
  if (!rc) n.fail_member("residual_capability", "expected can_attack or cannot_attack");
  v.mission = *mi;
  v.platform = *pd;
  v.capability = *rc;
  v.trend = n.string("trend", "");
  v.fallback_glide = n.boolean("fallback_glide", false);
  return v;
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["mission_impact"] = mission_impact_name(v.mission);
  j["platform_damage"] = platform_damage_name(v.platform);
  j["residual_capability"] = capability_name(v.capability);
  j["trend"] = v.trend;
  if (v.fallback_glide) j["fallback_glide"] = true;
  return j;
}

bool excluded(const RuleBase& rb, const FeatureVector& f) {
  return std::find(rb.exclude_phases.begin(), rb.exclude_phases.end(), f.phase) != rb.exclude_phases.end();
}

std::optional<double> estimate_onset(std::span<const FeatureVector> fv, const RuleBase& rb, const Rule& rule) {
  if (fv.empty()) return std::nullopt;
  std::set<std::string> names;
  for (const auto& p : rule.when) names.insert(p.feature);
  const double t0 = fv.front().t_start;
  const double stride = fv.size() > 1 ? fv[1].t_start - fv[0].t_start : fv[0].t_end - fv[0].t_start;

  std::vector<const FeatureVector*> base;
  for (const auto& f : fv) {
    if (f.t_end <= t0 + rb.onset.baseline + 1e-9 && !excluded(rb, f)) base.push_back(&f);
  }
  if (base.empty()) return std::nullopt;

  struct Band {
    std::string name;
    double mean;
    double half_width;
  };
  std::vector<Band> bands;
  for (const auto& name : names) {
    double sum = 0.0;
    for (const auto* f : base) sum += *feature_value(*f, name);
    const double mean = sum / static_cast<double>(base.size());
    double ss = 0.0;
    for (const auto* f : base) {
      const double d = *feature_value(*f, name) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(base.size()));
    const double floor = 1e-9 + 1e-6 * std::abs(mean);
    bands.push_back({name, mean, rb.onset.factor * std::max(sd, floor)});
  }
  const double base_end = base.back()->t_end;
  auto outside = [&](const FeatureVector& f) {
    return std::any_of(bands.begin(), bands.end(), [&](const Band& b) {
      return std::abs(*feature_value(f, b.name) - b.mean) > b.half_width;
    });
  };
  auto fires = [&](const FeatureVector& f) {
    return std::all_of(rule.when.begin(), rule.when.end(), [&](const Predicate& p) { return p.holds(f); });
  };

  // Walk back from the first window where the rule holds across the
  // unbroken run of out-of-band windows leading up to it. Earlier isolated
  // excursions (phase changes, gusts) are not part of that run.
  std::size_t first = fv.size();
  for (std::size_t i = 0; i < fv.size(); ++i) {
    if (fv[i].t_end > base_end + 1e-9 && !excluded(rb, fv[i]) && fires(fv[i])) {
      first = i;
      break;
    }
  }
  if (first == fv.size()) return std::nullopt;
  std::size_t start = first;
  while (start > 0) {
    const auto& prev = fv[start - 1];
    if (prev.t_end <= base_end + 1e-9 || excluded(rb, prev) || !outside(prev)) break;
    --start;
  }
  return fv[start].t_end - 0.5 * stride;
}

}  // namespace

std::string_view mission_impact_name(MissionImpact v) {
  switch (v) {
    case MissionImpact::None: return "none";
    case MissionImpact::Degraded: return "degraded";
    case MissionImpact::Failed: return "failed";
  }
  return "none";
}

std::string_view platform_damage_name(PlatformDamage v) {
  switch (v) {
    case PlatformDamage::None: return "none";
    case PlatformDamage::Minor: return "minor";
    case PlatformDamage::Delayed: return "delayed";
    case PlatformDamage::Destroyed: return "destroyed";
  }
  return "none";
}

std::string_view capability_name(Capability v) {
  return v == Capability::CanAttack ? "can_attack" : "cannot_attack";
}

std::optional<MissionImpact> parse_mission_impact(std::string_view s) {
  for (auto v : {MissionImpact::None, MissionImpact::Degraded, MissionImpact::Failed}) {
    if (mission_impact_name(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<PlatformDamage> parse_platform_damage(std::string_view s) {
  for (auto v : {PlatformDamage::None, PlatformDamage::Minor, PlatformDamage::Delayed, PlatformDamage::Destroyed}) {
    if (platform_damage_name(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Capability> parse_capability(std::string_view s) {
  for (auto v : {Capability::CanAttack, Capability::CannotAttack}) {
    if (capability_name(v) == s) return v;
  }
  return std::nullopt;
}

bool Predicate::holds(const FeatureVector& f) const {
  const auto v = feature_value(f, feature);
  if (!v) return false;
  switch (op) {
    case Comparison::Greater: return *v > value;
    case Comparison::GreaterEqual: return *v >= value;
    case Comparison::Less: return *v < value;
    case Comparison::LessEqual: return *v <= value;
    case Comparison::AbsGreater: return std::abs(*v) > value;
    case Comparison::AbsLess: return std::abs(*v) < value;
  }
  return false;
}

void RuleBase::validate() const {
  if (rules.empty()) throw ConstraintError("rule base '" + name + "' has no rules");
  if (!(onset.baseline > 0.0) || !(onset.factor > 0.0)) throw ConstraintError("onset baseline and factor must be positive");
  if (nominal.mission != MissionImpact::None || nominal.platform != PlatformDamage::None) {
    throw ConstraintError("nominal verdict must report no mission impact and no platform damage");
  }
  const auto& names = feature_names();
  for (const auto& r : rules) {
    if (r.when.empty()) throw ConstraintError("rule '" + r.name + "' has no conditions");
    if (r.min_windows < 1) throw ConstraintError("rule '" + r.name + "' needs min_windows >= 1");
    if (r.location == faultlab::FaultLocation::None) {
      throw ConstraintError("rule '" + r.name + "' must name a fault location");
    }
    if (r.mode && faultlab::location_of(*r.mode) != r.location) {
      throw ConstraintError("rule '" + r.name + "': mode does not belong to the location");
    }
    for (const auto& p : r.when) {
      if (std::find(names.begin(), names.end(), p.feature) == names.end()) {
        throw ConstraintError("rule '" + r.name + "': unknown feature '" + p.feature + "'");
      }
    }
  }
}

RuleBase default_rule_base() { return parse_rule_base(kDefaultRules); }

RuleBase parse_rule_base(const std::string& text) {
  const json doc = parse_json_text(text, "rule base");
  const JsonLineIndex index(text);
  const JsonNode root(doc, "", index);
  root.expect_object();
  root.only({"name", "exclude_phases", "onset", "nominal", "rules"});

  RuleBase rb;
  rb.name = root.string("name", rb.name);
  if (root.has("exclude_phases")) {
    const JsonNode arr = root.at("exclude_phases");
    arr.expect_array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const JsonNode p = arr.element(i);
      const auto ph = parse_phase(p.string());
      if (!ph) p.fail("unknown phase '" + p.string() + "'");
      rb.exclude_phases.push_back(*ph);
    }
  }
  if (root.has("onset")) {
    const JsonNode o = root.at("onset");
    o.expect_object();
    o.only({"baseline_s", "factor"});
    rb.onset.baseline = o.number("baseline_s", rb.onset.baseline);
    rb.onset.factor = o.number("factor", rb.onset.factor);
  }
  if (root.has("nominal")) rb.nominal = parse_verdict(root.at("nominal"));

  const auto& names = feature_names();
  const JsonNode rules = root.at("rules");
  rules.expect_array();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const JsonNode n = rules.element(i);
    n.expect_object();
    n.only({"name", "location", "mode", "when", "min_windows", "verdict"});
    Rule r;
    r.name = n.string("name", "rule" + std::to_string(i));
    const JsonNode loc = n.at("location");
    const auto location = faultlab::parse_location(loc.string());
    if (!location || *location == faultlab::FaultLocation::None) loc.fail("expected gps, imu or actuator");
    r.location = *location;
    if (n.has("mode") && !n.at("mode").is_null()) {
      const JsonNode m = n.at("mode");
      const auto mode = faultlab::parse_mode(m.string());
      if (!mode) m.fail("unknown fault mode '" + m.string() + "'");
      if (faultlab::location_of(*mode) != r.location) m.fail("mode does not belong to location " + loc.string());
      r.mode = *mode;
    }
    const JsonNode when = n.at("when");
    when.expect_array();
    for (std::size_t k = 0; k < when.size(); ++k) {
      const JsonNode c = when.element(k);
      c.expect_object();
      c.only({"feature", "op", "value"});
      Predicate p;
      p.feature = c.at("feature").string();
      if (std::find(names.begin(), names.end(), p.feature) == names.end()) {
        c.fail_member("feature", "unknown feature '" + p.feature + "'");
      }
      const auto op = parse_comparison(c.at("op").string());
      if (!op) c.fail_member("op", "expected one of > >= < <= abs> abs<");
      p.op = *op;
      p.value = c.at("value").number();
      r.when.push_back(std::move(p));
    }
    if (r.when.empty()) when.fail("at least one condition required");
    r.min_windows = static_cast<int>(n.integer("min_windows", 1));
    if (r.min_windows < 1) n.fail_member("min_windows", "must be at least 1");
    if (n.has("verdict")) r.verdict = parse_verdict(n.at("verdict"));
    rb.rules.push_back(std::move(r));
  }
  rb.validate();
  return rb;
}

RuleBase load_rule_base(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rule base " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_rule_base(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.field());
  }
}

std::string rule_base_to_json(const RuleBase& rb) {
  ordered_json j;
  j["name"] = rb.name;
  ordered_json ex = ordered_json::array();
  for (auto p : rb.exclude_phases) ex.push_back(phase_name(p));
  j["exclude_phases"] = ex;
  j["onset"] = {{"baseline_s", rb.onset.baseline}, {"factor", rb.onset.factor}};
  j["nominal"] = verdict_json(rb.nominal);
  ordered_json rules = ordered_json::array();
  for (const auto& r : rb.rules) {
    ordered_json rj;
    rj["name"] = r.name;
    rj["location"] = faultlab::location_name(r.location);
    rj["mode"] = r.mode ? ordered_json(faultlab::mode_name(*r.mode)) : ordered_json(nullptr);
    ordered_json when = ordered_json::array();
    for (const auto& p : r.when) {
      when.push_back({{"feature", p.feature}, {"op", comparison_name(p.op)}, {"value", p.value}});
    }
    rj["when"] = when;
    rj["min_windows"] = r.min_windows;
    rj["verdict"] = verdict_json(r.verdict);
    rules.push_back(rj);
  }
  j["rules"] = rules;
  return j.dump(2) + "\n";
}

DamageReport classify(std::span<const FeatureVector> features, const RuleBase& rules) {
  DamageReport report;
  report.mission = rules.nominal.mission;
  report.platform = rules.nominal.platform;
  report.capability = rules.nominal.capability;
  report.trend = rules.nominal.trend;

  for (const auto& rule : rules.rules) {
    int hits = 0;
    for (const auto& f : features) {
      if (excluded(rules, f)) continue;
      const bool all = std::all_of(rule.when.begin(), rule.when.end(), [&](const Predicate& p) { return p.holds(f); });
      if (all && ++hits >= rule.min_windows) break;
    }
    if (hits < rule.min_windows) continue;
    report.location = rule.location;
    report.mode = rule.mode;
    report.rule = rule.name;
    report.mission = rule.verdict.mission;
    report.platform = rule.verdict.platform;
    report.capability = rule.verdict.capability;
    report.trend = rule.verdict.trend;
    report.fallback_glide = rule.verdict.fallback_glide;
    report.onset = estimate_onset(features, rules, rule);
    break;
  }
  return report;
}

}  // namespace uavlab::damage
