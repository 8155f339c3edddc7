#include "uavlab/campaign/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "scenario_json.hpp"
#include "uavlab/common/error.hpp"
#include "uavlab/flightdyn/table_io.hpp"

namespace uavlab::campaign {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double deg(const JsonNode& n, const std::string& key, double fallback_rad) {
  return deg2rad(n.number(key, rad2deg(fallback_rad)));
}

/// Durations may be null (unbounded) or a positive number.
double duration_value(const JsonNode& n, const std::string& key, double fallback) {
  if (!n.has(key)) return fallback;
  const JsonNode v = n.at(key);
  if (v.is_null()) return kInf;
  return v.number();
}

ordered_json duration_json(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

constexpr const char* kAxisNames[] = {"x", "y", "z"};
constexpr const char* kChannelNames[] = {"elevator", "aileron", "rudder"};

std::array<bool, 3> parse_selection(const JsonNode& arr, const char* const names[3]) {
  arr.expect_array();
  std::array<bool, 3> sel{false, false, false};
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string s = arr.element(i).string();
    bool found = false;
    for (int k = 0; k < 3; ++k) {
      if (s == names[k]) sel[k] = found = true;
    }
    if (!found) arr.element(i).fail("unknown axis or channel '" + s + "'");
  }
  return sel;
}

ordered_json selection_json(const std::array<bool, 3>& sel, const char* const names[3]) {
  ordered_json a = ordered_json::array();
  for (int k = 0; k < 3; ++k) {
    if (sel[k]) a.push_back(names[k]);
  }
  return a;
}

}  // namespace

faultlab::FaultParams parse_fault_params(const JsonNode& n, faultlab::FaultMode mode) {
  faultlab::FaultParams p = faultlab::default_params(mode);
  n.only({"gain", "bias_deg", "drift_rate_dps", "drift_duration_s", "pulse_count", "pulse_height_deg",
          "pulse_width_s", "pulse_interval_s", "jitter_on_s", "jitter_off_s", "wander_sigma_deg", "wander_tau_s",
          "offset_deg", "satellites", "axes", "channels"});
  p.gain = n.number("gain", p.gain);
  if (n.has("bias_deg")) {
    const JsonNode b = n.at("bias_deg");
    if (b.is_array()) {
      if (b.size() != 3) b.fail("expected three values");
      for (std::size_t i = 0; i < 3; ++i) p.bias[i] = deg2rad(b.element(i).number());
    } else {
      p.bias.fill(deg2rad(b.number()));
    }
  }
  p.drift_rate = deg(n, "drift_rate_dps", p.drift_rate);
  p.drift_duration = n.number("drift_duration_s", p.drift_duration);
  p.pulse_count = static_cast<int>(n.integer("pulse_count", p.pulse_count));
  p.pulse_height = deg(n, "pulse_height_deg", p.pulse_height);
  p.pulse_width = n.number("pulse_width_s", p.pulse_width);
  p.pulse_interval = n.number("pulse_interval_s", p.pulse_interval);
  p.jitter_on = n.number("jitter_on_s", p.jitter_on);
  p.jitter_off = n.number("jitter_off_s", p.jitter_off);
  p.wander_sigma = deg(n, "wander_sigma_deg", p.wander_sigma);
  p.wander_tau = n.number("wander_tau_s", p.wander_tau);
  p.position_offset = n.number("offset_deg", p.position_offset);
  p.satellites = static_cast<int>(n.integer("satellites", p.satellites));
  if (n.has("axes")) p.axes = parse_selection(n.at("axes"), kAxisNames);
  if (n.has("channels")) p.axes = parse_selection(n.at("channels"), kChannelNames);
  return p;
}

nlohmann::ordered_json fault_params_json(faultlab::FaultMode mode, const faultlab::FaultParams& p) {
  ordered_json j;
  j["gain"] = p.gain;
  j["bias_deg"] = {rad2deg(p.bias[0]), rad2deg(p.bias[1]), rad2deg(p.bias[2])};
  j["drift_rate_dps"] = rad2deg(p.drift_rate);
  j["drift_duration_s"] = p.drift_duration;
  j["pulse_count"] = p.pulse_count;
  j["pulse_height_deg"] = rad2deg(p.pulse_height);
  j["pulse_width_s"] = p.pulse_width;
  j["pulse_interval_s"] = p.pulse_interval;
  j["jitter_on_s"] = p.jitter_on;
  j["jitter_off_s"] = p.jitter_off;
  j["wander_sigma_deg"] = rad2deg(p.wander_sigma);
  j["wander_tau_s"] = p.wander_tau;
  j["offset_deg"] = p.position_offset;
  j["satellites"] = p.satellites;
  if (faultlab::location_of(mode) == faultlab::FaultLocation::Actuator) {
    j["channels"] = selection_json(p.axes, kChannelNames);
  } else {
    j["axes"] = selection_json(p.axes, kAxisNames);
  }
  return j;
}

namespace {

faultlab::FaultSpec parse_fault(const JsonNode& n) {
  n.only({"target", "mode", "params", "start_s", "phase", "offset_s", "duration_s"});
  faultlab::FaultSpec spec;
  const JsonNode mode_node = n.at("mode");
  const auto mode = faultlab::parse_mode(mode_node.string());
  if (!mode) mode_node.fail("unknown fault mode '" + mode_node.string() + "'");
  spec.mode = *mode;
  const auto loc = faultlab::location_of(*mode);
  const std::string expected_target = loc == faultlab::FaultLocation::Gps   ? "gps"
                                      : loc == faultlab::FaultLocation::Imu ? "imu"
                                                                            : "servo";
  const std::string target = n.string("target", expected_target);
  if (target != expected_target) {
    n.fail_member("target", "mode " + mode_node.string() + " targets '" + expected_target + "'");
  }
  spec.params = n.has("params") ? parse_fault_params(n.at("params"), *mode) : faultlab::default_params(*mode);
  if (n.has("phase")) {
    const JsonNode ph = n.at("phase");
    const auto phase = parse_phase(ph.string());
    if (!phase) ph.fail("unknown phase '" + ph.string() + "'");
    if (n.has("start_s")) n.fail_member("start_s", "use either start_s or phase/offset_s");
    spec.anchor = faultlab::PhaseAnchor{*phase, n.number("offset_s", 0.0)};
  } else {
    if (n.has("offset_s")) n.fail_member("offset_s", "offset_s requires phase");
    spec.start = n.at("start_s").number();
  }
  spec.duration = duration_value(n, "duration_s", kInf);
  return spec;
}

ordered_json fault_json(const faultlab::FaultSpec& s) {
  ordered_json j;
  const auto loc = faultlab::location_of(s.mode);
  j["target"] = loc == faultlab::FaultLocation::Gps ? "gps" : loc == faultlab::FaultLocation::Imu ? "imu" : "servo";
  j["mode"] = faultlab::mode_name(s.mode);
  j["params"] = fault_params_json(s.mode, s.params);
  if (s.anchor) {
    j["phase"] = phase_name(s.anchor->phase);
    j["offset_s"] = s.anchor->offset;
  } else {
    j["start_s"] = s.start.value_or(0.0);
  }
  j["duration_s"] = duration_json(s.duration);
  return j;
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.string();
}

void parse_gains(const JsonNode& n, autopilot::AutopilotGains& g) {
  n.only({"altitude_kp", "altitude_ki", "climb_rate_kd", "max_pitch_deg", "min_pitch_deg", "pitch_kp", "pitch_ki",
          "pitch_rate_kd", "speed_kp", "speed_ki", "course_kp", "cross_track_gain", "max_intercept_deg",
          "max_roll_deg", "roll_kp", "roll_ki", "roll_rate_kd", "yaw_damper", "washout_tau_s", "surface_limit_deg"});
  g.altitude_kp = n.number("altitude_kp", g.altitude_kp);
  g.altitude_ki = n.number("altitude_ki", g.altitude_ki);
  g.climb_rate_kd = n.number("climb_rate_kd", g.climb_rate_kd);
  g.max_pitch = deg(n, "max_pitch_deg", g.max_pitch);
  g.min_pitch = deg(n, "min_pitch_deg", g.min_pitch);
  g.pitch_kp = n.number("pitch_kp", g.pitch_kp);
  g.pitch_ki = n.number("pitch_ki", g.pitch_ki);
  g.pitch_rate_kd = n.number("pitch_rate_kd", g.pitch_rate_kd);
  g.speed_kp = n.number("speed_kp", g.speed_kp);
  g.speed_ki = n.number("speed_ki", g.speed_ki);
  g.course_kp = n.number("course_kp", g.course_kp);
  g.cross_track_gain = n.number("cross_track_gain", g.cross_track_gain);
  g.max_intercept = deg(n, "max_intercept_deg", g.max_intercept);
  g.max_roll = deg(n, "max_roll_deg", g.max_roll);
  g.roll_kp = n.number("roll_kp", g.roll_kp);
  g.roll_ki = n.number("roll_ki", g.roll_ki);
  g.roll_rate_kd = n.number("roll_rate_kd", g.roll_rate_kd);
  g.yaw_damper = n.number("yaw_damper", g.yaw_damper);
  g.washout_tau = n.number("washout_tau_s", g.washout_tau);
  g.surface_limit = deg(n, "surface_limit_deg", g.surface_limit);
}

ordered_json gains_json(const autopilot::AutopilotGains& g) {
  ordered_json j;
  j["altitude_kp"] = g.altitude_kp;
  j["altitude_ki"] = g.altitude_ki;
  j["climb_rate_kd"] = g.climb_rate_kd;
  j["max_pitch_deg"] = rad2deg(g.max_pitch);
  j["min_pitch_deg"] = rad2deg(g.min_pitch);
  j["pitch_kp"] = g.pitch_kp;
  j["pitch_ki"] = g.pitch_ki;
  j["pitch_rate_kd"] = g.pitch_rate_kd;
  j["speed_kp"] = g.speed_kp;
  j["speed_ki"] = g.speed_ki;
  j["course_kp"] = g.course_kp;
  j["cross_track_gain"] = g.cross_track_gain;
  j["max_intercept_deg"] = rad2deg(g.max_intercept);
  j["max_roll_deg"] = rad2deg(g.max_roll);
  j["roll_kp"] = g.roll_kp;
  j["roll_ki"] = g.roll_ki;
  j["roll_rate_kd"] = g.roll_rate_kd;
  j["yaw_damper"] = g.yaw_damper;
  j["washout_tau_s"] = g.washout_tau;
  j["surface_limit_deg"] = rad2deg(g.surface_limit);
  return j;
}

}  // namespace

int Scenario::log_decimation() const {
  const double control_rate = 1.0 / control_period();
  return std::max(1, static_cast<int>(std::lround(control_rate / log_rate)));
}

void Scenario::validate() const {
  if (!(duration > 0.0 && std::isfinite(duration))) throw ConstraintError("duration must be positive");
  if (!(dt > 0.0)) throw ConstraintError("dt must be positive");
  if (control_substeps < 1) throw ConstraintError("control rate must not exceed the physics rate");
  if (gps_decimation < 1) throw ConstraintError("GPS rate must not exceed the control rate");
  if (!(log_rate > 0.0)) throw ConstraintError("log rate must be positive");
  aircraft.validate();
  mission.validate();
  if (!(initial.altitude > 0.0 && initial.airspeed > 0.0)) {
    throw ConstraintError("initial altitude and airspeed must be positive");
  }
  if (!(failsafe.divergence_window > 0.0)) throw ConstraintError("divergence window must be positive");
  if (!(servo.time_constant >= 0.0 && servo.rate_limit > 0.0 && servo.position_limit > 0.0)) {
    throw ConstraintError("invalid servo parameters");
  }
}

Scenario default_scenario() {
  Scenario s;
  s.mission = autopilot::straight_mission(s.initial.heading, 30000.0, s.initial.altitude, s.initial.airspeed);
  s.mission.level_flight_duration = 150.0;
  return s;
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  const json doc = parse_json_text(text, "scenario");
  const JsonLineIndex index(text);
  const JsonNode root(doc, "", index);
  root.expect_object();
  root.only({"name", "seed", "duration_s", "dt_s", "control_rate_hz", "gps_rate_hz", "log_rate_hz", "aircraft",
             "initial", "mission", "origin", "sensors", "servo", "autopilot", "faults", "output"});

  Scenario s = default_scenario();
  s.name = root.string("name", s.name);
  if (root.has("seed")) {
    const JsonNode n = root.at("seed");
    if (!n.value().is_number_unsigned() && !(n.value().is_number_integer() && n.value().get<long long>() >= 0)) {
      n.fail("seed must be a non-negative integer");
    }
    s.seed = n.value().get<std::uint64_t>();
  }
  s.duration = root.number("duration_s", s.duration);
  s.dt = root.number("dt_s", s.dt);
  if (!(s.dt > 0.0)) throw ConstraintError("dt must be positive");
  if (root.has("control_rate_hz")) {
    const double rate = root.at("control_rate_hz").number();
    if (!(rate > 0.0)) root.fail_member("control_rate_hz", "must be positive");
    s.control_substeps = static_cast<int>(std::lround(1.0 / (rate * s.dt)));
  }
  if (root.has("gps_rate_hz")) {
    const double rate = root.at("gps_rate_hz").number();
    if (!(rate > 0.0)) root.fail_member("gps_rate_hz", "must be positive");
    s.gps_decimation = static_cast<int>(std::lround(1.0 / (rate * s.control_period())));
  }
  s.log_rate = root.number("log_rate_hz", s.log_rate);

  if (root.has("initial")) {
    const JsonNode n = root.at("initial");
    n.only({"altitude_m", "airspeed_mps", "heading_deg", "phase"});
    s.initial.altitude = n.number("altitude_m", s.initial.altitude);
    s.initial.airspeed = n.number("airspeed_mps", s.initial.airspeed);
    s.initial.heading = deg(n, "heading_deg", s.initial.heading);
    if (n.has("phase")) {
      const auto ph = parse_phase(n.at("phase").string());
      if (!ph) n.fail_member("phase", "unknown phase");
      s.initial.phase = *ph;
    }
  }

  if (root.has("aircraft")) {
    const JsonNode n = root.at("aircraft");
    n.only({"mass_kg", "inertia_kgm2", "wing_area_m2", "mean_chord_m", "wingspan_m", "body_length_m", "aero_tables",
            "thrust_table"});
    auto& a = s.aircraft;
    a.mass = n.number("mass_kg", a.mass);
    if (n.has("inertia_kgm2")) {
      const JsonNode in = n.at("inertia_kgm2");
      in.only({"ixx", "iyy", "izz"});
      a.inertia.ixx = in.number("ixx", a.inertia.ixx);
      a.inertia.iyy = in.number("iyy", a.inertia.iyy);
      a.inertia.izz = in.number("izz", a.inertia.izz);
    }
    a.wing_area = n.number("wing_area_m2", a.wing_area);
    a.mean_chord = n.number("mean_chord_m", a.mean_chord);
    a.wingspan = n.number("wingspan_m", a.wingspan);
    a.body_length = n.number("body_length_m", a.body_length);
    if (n.has("aero_tables")) {
      s.aero_table_path = n.at("aero_tables").string();
      try {
        a.aero_tables = flightdyn::load_aero_tables(resolve_path(*s.aero_table_path, base_dir));
      } catch (const Error& e) {
        n.fail_member("aero_tables", e.what());
      }
    }
    if (n.has("thrust_table")) {
      s.thrust_table_path = n.at("thrust_table").string();
      try {
        a.thrust_table = flightdyn::load_thrust_table(resolve_path(*s.thrust_table_path, base_dir));
      } catch (const Error& e) {
        n.fail_member("thrust_table", e.what());
      }
    }
  }

  // Mission defaults follow the initial condition unless overridden.
  s.mission = autopilot::straight_mission(s.initial.heading, 30000.0, s.initial.altitude, s.initial.airspeed);
  s.mission.level_flight_duration = 150.0;
  if (root.has("mission")) {
    const JsonNode n = root.at("mission");
    n.only({"cruise_speed_mps", "cruise_altitude_m", "capture_band_m", "capture_hold_s", "level_flight_duration_s",
            "glide_path_deg", "attack_altitude_m", "attack_path_deg", "waypoint_radius_m", "target_range_m",
            "waypoints"});
    auto& m = s.mission;
    const double range = n.number("target_range_m", 30000.0);
    m.waypoints = autopilot::straight_mission(s.initial.heading, range, 0.0, 1.0).waypoints;
    m.cruise_speed = n.number("cruise_speed_mps", m.cruise_speed);
    m.cruise_altitude = n.number("cruise_altitude_m", m.cruise_altitude);
    m.capture_band = n.number("capture_band_m", m.capture_band);
    m.capture_hold = n.number("capture_hold_s", m.capture_hold);
    m.level_flight_duration = duration_value(n, "level_flight_duration_s", m.level_flight_duration);
    m.glide_path_angle = deg(n, "glide_path_deg", m.glide_path_angle);
    m.attack_altitude = n.number("attack_altitude_m", m.attack_altitude);
    m.attack_path_angle = deg(n, "attack_path_deg", m.attack_path_angle);
    m.waypoint_radius = n.number("waypoint_radius_m", m.waypoint_radius);
    if (n.has("waypoints")) {
      const JsonNode w = n.at("waypoints");
      w.expect_array();
      m.waypoints.clear();
      for (std::size_t i = 0; i < w.size(); ++i) {
        const JsonNode e = w.element(i);
        e.only({"north_m", "east_m", "altitude_m"});
        m.waypoints.push_back({e.at("north_m").number(), e.at("east_m").number(), e.number("altitude_m", 0.0)});
      }
    }
  }

  if (root.has("origin")) {
    const JsonNode n = root.at("origin");
    n.only({"latitude_deg", "longitude_deg"});
    s.origin.latitude = n.number("latitude_deg", s.origin.latitude);
    s.origin.longitude = n.number("longitude_deg", s.origin.longitude);
  }

  if (root.has("sensors")) {
    const JsonNode n = root.at("sensors");
    n.only({"imu", "gps", "airspeed_sigma_mps"});
    if (n.has("imu")) {
      const JsonNode i = n.at("imu");
      i.only({"attitude_sigma_deg", "rate_sigma_dps", "accel_sigma_mps2"});
      s.sensors.imu.attitude_sigma = deg(i, "attitude_sigma_deg", s.sensors.imu.attitude_sigma);
      s.sensors.imu.rate_sigma = deg(i, "rate_sigma_dps", s.sensors.imu.rate_sigma);
      s.sensors.imu.accel_sigma = i.number("accel_sigma_mps2", s.sensors.imu.accel_sigma);
    }
    if (n.has("gps")) {
      const JsonNode g = n.at("gps");
      g.only({"horizontal_sigma_m", "vertical_sigma_m", "speed_sigma_mps", "satellites"});
      s.sensors.gps.horizontal_sigma = g.number("horizontal_sigma_m", s.sensors.gps.horizontal_sigma);
      s.sensors.gps.vertical_sigma = g.number("vertical_sigma_m", s.sensors.gps.vertical_sigma);
      s.sensors.gps.speed_sigma = g.number("speed_sigma_mps", s.sensors.gps.speed_sigma);
      s.sensors.gps.satellites = static_cast<int>(g.integer("satellites", s.sensors.gps.satellites));
    }
    s.sensors.airspeed_sigma = n.number("airspeed_sigma_mps", s.sensors.airspeed_sigma);
  }

  if (root.has("servo")) {
    const JsonNode n = root.at("servo");
    n.only({"time_constant_s", "rate_limit_dps", "limit_deg", "throttle_time_constant_s"});
    s.servo.time_constant = n.number("time_constant_s", s.servo.time_constant);
    s.servo.rate_limit = deg(n, "rate_limit_dps", s.servo.rate_limit);
    s.servo.position_limit = deg(n, "limit_deg", s.servo.position_limit);
    s.servo.throttle_time_constant = n.number("throttle_time_constant_s", s.servo.throttle_time_constant);
  }

  if (root.has("autopilot")) {
    const JsonNode n = root.at("autopilot");
    n.only({"gains", "failsafe", "gps_integrity", "imu_monitor"});
    if (n.has("gains")) parse_gains(n.at("gains"), s.gains);
    if (n.has("failsafe")) {
      const JsonNode f = n.at("failsafe");
      f.only({"divergence_window_s", "fallback_pitch_deg", "hold_zero_throttle"});
      s.failsafe.divergence_window = f.number("divergence_window_s", s.failsafe.divergence_window);
      s.failsafe.fallback_pitch = deg(f, "fallback_pitch_deg", s.failsafe.fallback_pitch);
      s.failsafe.hold_zero_throttle = f.boolean("hold_zero_throttle", s.failsafe.hold_zero_throttle);
    }
    if (n.has("gps_integrity")) {
      const JsonNode g = n.at("gps_integrity");
      g.only({"validity_threshold", "jump_threshold_m", "deception_latency_s"});
      s.gps_integrity.validity_threshold =
          static_cast<int>(g.integer("validity_threshold", s.gps_integrity.validity_threshold));
      s.gps_integrity.jump_threshold = g.number("jump_threshold_m", s.gps_integrity.jump_threshold);
      s.gps_integrity.deception_latency = g.number("deception_latency_s", s.gps_integrity.deception_latency);
    }
    if (n.has("imu_monitor")) {
      const JsonNode m = n.at("imu_monitor");
      m.only({"residual_threshold_deg", "leak_time_constant_s"});
      s.imu_monitor.residual_threshold = deg(m, "residual_threshold_deg", s.imu_monitor.residual_threshold);
      s.imu_monitor.leak_time_constant = m.number("leak_time_constant_s", s.imu_monitor.leak_time_constant);
    }
  }
  s.sensors.gps.validity_threshold = s.gps_integrity.validity_threshold;

  if (root.has("faults")) {
    const JsonNode n = root.at("faults");
    n.expect_array();
    std::vector<faultlab::FaultSpec> specs;
    for (std::size_t i = 0; i < n.size(); ++i) specs.push_back(parse_fault(n.element(i)));
    s.faults = faultlab::FaultSchedule(std::move(specs));
  }

  if (root.has("output")) {
    const JsonNode n = root.at("output");
    n.only({"telemetry"});
    if (n.has("telemetry")) s.telemetry_path = n.at("telemetry").string();
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.field());
  }
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["duration_s"] = s.duration;
  j["dt_s"] = s.dt;
  j["control_rate_hz"] = 1.0 / s.control_period();
  j["gps_rate_hz"] = 1.0 / (s.control_period() * s.gps_decimation);
  j["log_rate_hz"] = s.log_rate;

  ordered_json a;
  a["mass_kg"] = s.aircraft.mass;
  a["inertia_kgm2"] = {{"ixx", s.aircraft.inertia.ixx}, {"iyy", s.aircraft.inertia.iyy}, {"izz", s.aircraft.inertia.izz}};
  a["wing_area_m2"] = s.aircraft.wing_area;
  a["mean_chord_m"] = s.aircraft.mean_chord;
  a["wingspan_m"] = s.aircraft.wingspan;
  a["body_length_m"] = s.aircraft.body_length;
  if (s.aero_table_path) a["aero_tables"] = *s.aero_table_path;
  if (s.thrust_table_path) a["thrust_table"] = *s.thrust_table_path;
  j["aircraft"] = a;

  j["initial"] = {{"altitude_m", s.initial.altitude},
                  {"airspeed_mps", s.initial.airspeed},
                  {"heading_deg", rad2deg(s.initial.heading)},
                  {"phase", phase_name(s.initial.phase)}};

  ordered_json m;
  m["cruise_speed_mps"] = s.mission.cruise_speed;
  m["cruise_altitude_m"] = s.mission.cruise_altitude;
  m["capture_band_m"] = s.mission.capture_band;
  m["capture_hold_s"] = s.mission.capture_hold;
  m["level_flight_duration_s"] = duration_json(s.mission.level_flight_duration);
  m["glide_path_deg"] = rad2deg(s.mission.glide_path_angle);
  m["attack_altitude_m"] = s.mission.attack_altitude;
  m["attack_path_deg"] = rad2deg(s.mission.attack_path_angle);
  m["waypoint_radius_m"] = s.mission.waypoint_radius;
  ordered_json wps = ordered_json::array();
  for (const auto& w : s.mission.waypoints) {
    wps.push_back({{"north_m", w.north}, {"east_m", w.east}, {"altitude_m", w.altitude}});
  }
  m["waypoints"] = wps;
  j["mission"] = m;

  j["origin"] = {{"latitude_deg", s.origin.latitude}, {"longitude_deg", s.origin.longitude}};
  j["sensors"] = {{"imu",
                   {{"attitude_sigma_deg", rad2deg(s.sensors.imu.attitude_sigma)},
                    {"rate_sigma_dps", rad2deg(s.sensors.imu.rate_sigma)},
                    {"accel_sigma_mps2", s.sensors.imu.accel_sigma}}},
                  {"gps",
                   {{"horizontal_sigma_m", s.sensors.gps.horizontal_sigma},
                    {"vertical_sigma_m", s.sensors.gps.vertical_sigma},
                    {"speed_sigma_mps", s.sensors.gps.speed_sigma},
                    {"satellites", s.sensors.gps.satellites}}},
                  {"airspeed_sigma_mps", s.sensors.airspeed_sigma}};
  j["servo"] = {{"time_constant_s", s.servo.time_constant},
                {"rate_limit_dps", rad2deg(s.servo.rate_limit)},
                {"limit_deg", rad2deg(s.servo.position_limit)},
                {"throttle_time_constant_s", s.servo.throttle_time_constant}};
  ordered_json ap;
  ap["gains"] = gains_json(s.gains);
  ap["failsafe"] = {{"divergence_window_s", s.failsafe.divergence_window},
                    {"fallback_pitch_deg", rad2deg(s.failsafe.fallback_pitch)},
                    {"hold_zero_throttle", s.failsafe.hold_zero_throttle}};
  ap["gps_integrity"] = {{"validity_threshold", s.gps_integrity.validity_threshold},
                         {"jump_threshold_m", s.gps_integrity.jump_threshold},
                         {"deception_latency_s", s.gps_integrity.deception_latency}};
  ap["imu_monitor"] = {{"residual_threshold_deg", rad2deg(s.imu_monitor.residual_threshold)},
                       {"leak_time_constant_s", s.imu_monitor.leak_time_constant}};
  j["autopilot"] = ap;

  ordered_json faults = ordered_json::array();
  for (const auto& f : s.faults.specs()) faults.push_back(fault_json(f));
  j["faults"] = faults;
  if (s.telemetry_path) j["output"] = {{"telemetry", *s.telemetry_path}};
  return j.dump(2) + "\n";
}

}  // namespace uavlab::campaign
