// Acceptance checks. Prints one line per criterion and exits non-zero when
// any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "properties.hpp"
#include "uavlab/campaign/campaign.hpp"
#include "uavlab/campaign/experiments.hpp"
#include "uavlab/campaign/scenario.hpp"
#include "uavlab/campaign/simulation.hpp"
#include "uavlab/common/units.hpp"
#include "uavlab/damage/report.hpp"
#include "uavlab/damage/rules.hpp"

namespace fs = std::filesystem;
using namespace uavlab;
using namespace uavlab::campaign;

namespace {

const fs::path kData = UAVLAB_TEST_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string csv_of(const std::vector<TelemetryFrame>& frames) {
  std::ostringstream os;
  write_telemetry_csv(os, frames);
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ScratchDir {
  explicit ScratchDir(const std::string& tag) : path(fs::temp_directory_path() / ("uavlab_acceptance_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path path;
};

double ground_speed(const TelemetryFrame& f) {
  const flightdyn::Vec3 v = flightdyn::quaternion_from_euler(f.attitude) * f.velocity_body;
  return std::hypot(v.x(), v.y());
}

std::optional<double> first_transition(const RunSummary& s, const std::string& kind, const std::string& to) {
  for (const auto& tr : s.transitions) {
    if (tr.kind == kind && tr.to.find(to) != std::string::npos) return tr.t;
  }
  return std::nullopt;
}

Outcome fault_algebra() {
  Stopwatch sw;
  const auto r = testing::check_fault_algebra(100000, 20240101);
  const double elapsed = sw.seconds();
  Outcome o;
  o.pass = r.ok() && r.cases >= 100000 && elapsed < 1.0;
  o.detail = std::to_string(r.cases) + " cases, " + std::to_string(r.failures) + " failures, worst rel err " +
             fmt("%.3g", r.worst) + ", " + fmt("%.3f s", elapsed);
  if (!r.detail.empty()) o.detail += " (" + r.detail + ")";
  return o;
}

Outcome transparency() {
  const Scenario s = default_scenario();
  const std::string with_layer = csv_of(run_simulation(s).frames);
  SimulationOptions bypass;
  bypass.bypass_faults = true;
  const std::string without = csv_of(run_simulation(s, bypass).frames);
  Outcome o;
  o.pass = with_layer == without && !with_layer.empty();
  o.detail = std::to_string(with_layer.size()) + " bytes of telemetry, " + (o.pass ? "identical" : "different");
  return o;
}

Outcome cruise_hold() {
  Stopwatch sw;
  const Scenario s = cruise_scenario(default_scenario(), 150.0, 45.0, 200.0);
  const RunResult r = run_simulation(s);
  double worst_alt = 0.0, worst_speed = 0.0;
  for (const auto& f : r.frames) {
    worst_alt = std::max(worst_alt, std::abs(-f.position.z() - 150.0));
    worst_speed = std::max(worst_speed, std::abs(f.velocity_body.norm() - 45.0));
  }
  const double elapsed = sw.seconds();
  Outcome o;
  o.pass = r.summary.termination == Termination::Duration && r.frames.back().t >= 199.9 && worst_alt <= 5.0 &&
           worst_speed <= 2.0 && elapsed < 30.0;
  o.detail = "max |dh| " + fmt("%.3f m", worst_alt) + ", max |dV| " + fmt("%.3f m/s", worst_speed) + ", " +
             fmt("%.2f s", elapsed);
  return o;
}

Outcome step_response() {
  const auto r = step_response_experiment(default_scenario(), 50.0, 250.0);
  const auto& m = r.metrics;
  Outcome o;
  o.pass = m.overshoot_percent >= 10.0 && m.overshoot_percent <= 35.0 && m.steady_state_error < 0.5 && m.settled &&
           m.settling_time < 120.0;
  o.detail = "overshoot " + fmt("%.2f %%", m.overshoot_percent) + ", steady-state error " +
             fmt("%.3f m", m.steady_state_error) + ", settling " + fmt("%.1f s", m.settling_time);
  return o;
}

Outcome deception_fallback() {
  Stopwatch sw;
  const Scenario s = load_scenario(kData / "scenarios" / "gps_deception_level.json");
  const RunResult r = run_simulation(s);
  const double elapsed = sw.seconds();
  Outcome o;
  const auto injected = first_transition(r.summary, "fault", "gps_deception");
  const auto positioning = first_transition(r.summary, "failsafe", "imu_positioning");
  const auto fallback = first_transition(r.summary, "failsafe", "level_flight_fallback");
  if (!injected || !positioning || !fallback) {
    o.detail = "missing transition (fault/imu_positioning/level_flight_fallback)";
    return o;
  }
  // Detection latches one second after the first deceived GPS epoch.
  const double gps_period = s.control_period() * s.gps_decimation;
  const double detect_latest = *injected + gps_period + 1.0 + s.control_period() + 1e-9;
  const bool on_detection = *positioning >= *injected + 1.0 - 1e-9 && *positioning <= detect_latest;
  const double window = *fallback - *positioning;

  double max_throttle = 0.0, worst_pitch = 0.0;
  std::vector<damage::GlideSample> glide;
  for (const auto& f : r.frames) {
    if (f.t < *fallback) continue;
    max_throttle = std::max(max_throttle, std::abs(f.command.throttle));
    worst_pitch = std::max(worst_pitch, std::abs(rad2deg(f.pitch_target) - 3.0));
    glide.push_back({f.t, -f.position.z(), ground_speed(f)});
  }
  const double km = glide.empty() ? 0.0 : damage::glide_distance_estimate(glide);
  o.pass = on_detection && std::abs(window - 30.0) <= 0.1 && max_throttle == 0.0 && worst_pitch <= 0.1 &&
           km >= 4.0 && km <= 12.0 && elapsed < 60.0;
  o.detail = "fault " + fmt("%.2f s", *injected) + ", imu_positioning " + fmt("%.2f s", *positioning) +
             ", fallback after " + fmt("%.3f s", window) + ", max throttle " + fmt("%.3g", max_throttle) +
             ", max |pitch cmd - 3 deg| " + fmt("%.4f deg", worst_pitch) + ", glide " + fmt("%.2f km", km) + ", " +
             fmt("%.2f s", elapsed);
  return o;
}

struct StuckResult {
  bool impact = false;
  double impact_speed = 0.0;
  double cruise_speed = 0.0;
  double onset = 0.0;
  double last_rise = 0.0;  // time of the last altitude increase after onset
};

StuckResult stuck_run(std::uint64_t seed) {
  Scenario s = load_scenario(kData / "scenarios" / "servo_stuck_level.json");
  s.seed = seed;
  const RunResult r = run_simulation(s);
  StuckResult out;
  out.impact = r.summary.termination == Termination::GroundImpact;
  out.impact_speed = r.summary.final_state.airspeed();
  out.cruise_speed = r.summary.initial_airspeed;
  out.onset = first_transition(r.summary, "fault", "servo_stuck").value_or(0.0);
  out.last_rise = out.onset;
  for (std::size_t i = 1; i < r.frames.size(); ++i) {
    if (r.frames[i].t <= out.onset) continue;
    if (-r.frames[i].position.z() > -r.frames[i - 1].position.z()) out.last_rise = r.frames[i].t;
  }
  return out;
}

Outcome stuck_servo() {
  const StuckResult r = stuck_run(1);
  Outcome o;
  const double transient = r.last_rise - r.onset;
  o.pass = r.impact && r.impact_speed > r.cruise_speed && transient <= 10.0;
  o.detail = std::string(r.impact ? "ground impact" : "no impact") + " at " + fmt("%.1f m/s", r.impact_speed) +
             " (cruise " + fmt("%.1f m/s", r.cruise_speed) + "), altitude monotone " + fmt("%.2f s", transient) +
             " after onset";
  int impacts = 0, monotone = 0;
  const int seeds = 20;
  for (int seed = 1; seed <= seeds; ++seed) {
    const StuckResult x = stuck_run(static_cast<std::uint64_t>(seed));
    if (x.impact && x.impact_speed > x.cruise_speed) ++impacts;
    if (x.last_rise - x.onset <= 10.0) ++monotone;
  }
  o.detail += "; seeds 1-" + std::to_string(seeds) + ": " + std::to_string(impacts) + " fast impacts, " +
              std::to_string(monotone) + " monotone within 10 s";
  return o;
}

Outcome classifier() {
  Stopwatch sw;
  ScratchDir dir("campaign");
  CampaignOptions opt;
  opt.parallel = std::max(1u, std::thread::hardware_concurrency());
  const CampaignMatrix m = standard_campaign_matrix();
  const CampaignIndex index = run_campaign(m, default_scenario(), dir.path, opt);
  const damage::RuleBase rules = damage::default_rule_base();
  const auto runs = damage::analyze_campaign(index, rules, opt.parallel);
  const auto score = damage::score_campaign(runs);
  const auto confusion = damage::location_confusion(runs);
  const double elapsed = sw.seconds();

  bool unambiguous = true;
  std::string per_mode;
  for (const char* mode : {"imu_disconnect", "gps_interruption"}) {
    const auto it = score.per_mode.find(mode);
    const bool ok = it != score.per_mode.end() && it->second.first > 0 && it->second.second == it->second.first;
    unambiguous = unambiguous && ok;
    if (it != score.per_mode.end()) {
      per_mode += std::string(", ") + mode + " " + std::to_string(it->second.second) + "/" +
                  std::to_string(it->second.first);
    }
  }
  Outcome o;
  o.pass = score.faulted_runs == 130 && score.location_accuracy() >= 0.9 && unambiguous &&
           score.false_positives == 0 && confusion.total() == m.run_count() && elapsed < 1800.0;
  o.detail = std::to_string(score.faulted_runs) + " faulted + " + std::to_string(score.control_runs) +
             " control runs, location " + fmt("%.1f %%", 100.0 * score.location_accuracy()) + ", mode " +
             fmt("%.1f %%", 100.0 * score.mode_accuracy()) + per_mode + ", false positives " +
             std::to_string(score.false_positives) + ", " + fmt("%.1f s", elapsed);
  return o;
}

Outcome determinism() {
  const Scenario s = load_scenario(kData / "scenarios" / "mixed_faults.json");
  const damage::RuleBase rules = damage::default_rule_base();
  ScratchDir a("det_a"), b("det_b");
  for (const auto* dir : {&a, &b}) {
    write_run_outputs(dir->path / "run", run_simulation(s), s);
    std::vector<damage::RunAnalysis> runs{damage::analyze_run("run", dir->path / "run.csv", rules)};
    runs[0].telemetry = "run.csv";
    damage::emit_report(runs, rules, dir->path / "report");
  }
  Outcome o;
  std::vector<std::string> differing;
  for (const char* rel : {"run.csv", "run.json", "report/report.json", "report/plots/run.svg"}) {
    const std::string x = slurp(a.path / rel);
    if (x.empty() || x != slurp(b.path / rel)) differing.emplace_back(rel);
  }
  o.pass = differing.empty();
  o.detail = o.pass ? "telemetry, summary, report and plot byte-identical" : "differs:";
  for (const auto& d : differing) o.detail += " " + d;
  return o;
}

Outcome invariants() {
  using Check = testing::PropertyResult (*)(std::size_t, std::uint64_t);
  const std::pair<const char*, Check> checks[] = {
      {"quaternion norm", testing::check_quaternion_norm},
      {"command clamping", testing::check_command_clamping},
      {"stuck latch", testing::check_stuck_latch},
      {"label fidelity", testing::check_label_fidelity},
      {"energy under zero thrust", testing::check_energy_monotonic},
  };
  Outcome o;
  o.pass = true;
  std::uint64_t seed = 900;
  for (const auto& [name, fn] : checks) {
    const auto r = fn(1000, seed++);
    const bool ok = r.ok() && r.cases >= 1000;
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += std::string(name) + " " + (ok ? "ok" : "FAILED") + " (" + std::to_string(r.cases) + ")";
    if (!ok && !r.detail.empty()) o.detail += " [" + r.detail + "]";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      fault_algebra, transparency, cruise_hold, step_response, deception_fallback,
      stuck_servo,   classifier,   determinism, invariants,
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
