#include "uavlab/damage/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "uavlab/common/error.hpp"
#include "uavlab/common/units.hpp"

namespace uavlab::damage {

using nlohmann::ordered_json;

double glide_distance_estimate(std::span<const GlideSample> s) {
  if (s.empty()) throw AnalysisError("glide estimate needs at least one sample");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].t > s[i - 1].t)) throw AnalysisError("glide samples must have increasing time");
  }
  if (s.front().altitude <= 0.0) return 0.0;
  double dist = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto& a = s[i - 1];
    const auto& b = s[i];
    const double dt = b.t - a.t;
    if (b.altitude <= 0.0) {
      // Touchdown inside this interval; ground speed interpolated linearly.
      const double frac = a.altitude / (a.altitude - b.altitude);
      const double v_touch = a.ground_speed + frac * (b.ground_speed - a.ground_speed);
      dist += 0.5 * (a.ground_speed + v_touch) * frac * dt;
      return dist / 1000.0;
    }
    dist += 0.5 * (a.ground_speed + b.ground_speed) * dt;
  }
  if (s.size() >= 2) {
    const auto& a = s[s.size() - 2];
    const auto& b = s.back();
    const double sink = (a.altitude - b.altitude) / (b.t - a.t);
    if (sink > 0.0) dist += b.altitude / sink * b.ground_speed;
  }
  return dist / 1000.0;
}

namespace {

constexpr std::size_t kMaxPlotPoints = 1500;

PlotSeries make_plot_series(std::span<const campaign::TelemetryFrame> frames) {
  PlotSeries p;
  const std::size_t step = std::max<std::size_t>(1, (frames.size() + kMaxPlotPoints - 1) / kMaxPlotPoints);
  for (std::size_t i = 0; i < frames.size(); i += step) {
    const auto& f = frames[i];
    p.t.push_back(f.t);
    p.altitude.push_back(-f.position.z());
    p.airspeed.push_back(f.airspeed);
    p.attitude[0].push_back(rad2deg(f.imu.attitude.roll));
    p.attitude[1].push_back(rad2deg(f.imu.attitude.pitch));
    p.attitude[2].push_back(rad2deg(f.imu.attitude.yaw));
    p.throttle.push_back(f.command.throttle);
    p.elevator_command.push_back(rad2deg(f.command.elevator));
    p.elevator_actual.push_back(rad2deg(f.actual.elevator));
  }
  return p;
}

std::optional<double> glide_from_frames(std::span<const campaign::TelemetryFrame> frames, const DamageReport& r,
                                        double idle) {
  const double from = r.onset.value_or(frames.front().t);
  std::size_t start = frames.size();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].t >= from && frames[i].command.throttle <= idle) {
      start = i;
      break;
    }
  }
  if (start == frames.size()) return std::nullopt;
  std::vector<GlideSample> samples;
  samples.reserve(frames.size() - start);
  for (std::size_t i = start; i < frames.size(); ++i) {
    const auto& f = frames[i];
    const flightdyn::Vec3 v = flightdyn::quaternion_from_euler(f.attitude) * f.velocity_body;
    samples.push_back({f.t, -f.position.z(), std::hypot(v.x(), v.y())});
  }
  return glide_distance_estimate(samples);
}

ordered_json label_json(const campaign::RunLabel& l) {
  ordered_json j;
  j["location"] = faultlab::location_name(l.location);
  j["mode"] = l.mode ? ordered_json(faultlab::mode_name(*l.mode)) : ordered_json(nullptr);
  j["phase"] = l.phase ? ordered_json(phase_name(*l.phase)) : ordered_json(nullptr);
  return j;
}

std::string inferred_mode_name(const DamageReport& r) {
  return r.mode ? std::string(faultlab::mode_name(*r.mode)) : std::string("none");
}

std::string truth_mode_name(const campaign::RunLabel& l) {
  return l.mode ? std::string(faultlab::mode_name(*l.mode)) : std::string("none");
}

ordered_json confusion_json(const ConfusionMatrix& m) {
  ordered_json j;
  j["labels"] = m.labels;
  j["counts"] = m.counts;
  j["total"] = m.total();
  return j;
}

std::string plot_file(const std::string& id) { return "plots/" + id + ".svg"; }

}  // namespace

DamageReport analyze_frames(std::span<const campaign::TelemetryFrame> frames, const RuleBase& rules,
                            const FeatureConfig& config) {
  const auto observed = observe(frames);
  const auto features = extract_features(observed, config);
  DamageReport r = classify(features, rules);
  if (r.fallback_glide) r.glide_distance_km = glide_from_frames(frames, r, config.throttle_idle);
  return r;
}

RunAnalysis analyze_run(const std::string& id, const std::filesystem::path& telemetry, const RuleBase& rules,
                        const FeatureConfig& config) {
  const auto frames = campaign::read_telemetry_csv(telemetry);
  RunAnalysis a;
  a.id = id;
  a.telemetry = telemetry.string();
  a.report = analyze_frames(frames, rules, config);
  a.end_time = frames.empty() ? 0.0 : frames.back().t;
  a.plot = make_plot_series(frames);
  return a;
}

std::vector<RunAnalysis> analyze_campaign(const campaign::CampaignIndex& index, const RuleBase& rules,
                                          unsigned parallel, const FeatureConfig& config) {
  std::vector<RunAnalysis> out(index.runs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= index.runs.size()) return;
      const auto& run = index.runs[i];
      try {
        out[i] = analyze_run(run.id, index.root / run.telemetry, rules, config);
        out[i].telemetry = run.telemetry;
        out[i].truth = run.label;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!error) error = std::current_exception();
        next.store(index.runs.size());
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(index.runs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

std::size_t ConfusionMatrix::diagonal() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
  return n;
}

ConfusionMatrix location_confusion(std::span<const RunAnalysis> runs) {
  ConfusionMatrix m;
  const faultlab::FaultLocation locs[] = {faultlab::FaultLocation::None, faultlab::FaultLocation::Gps,
                                          faultlab::FaultLocation::Imu, faultlab::FaultLocation::Actuator};
  for (auto l : locs) m.labels.emplace_back(faultlab::location_name(l));
  m.counts.assign(4, std::vector<std::size_t>(4, 0));
  for (const auto& r : runs) {
    if (!r.truth) continue;
    m.counts[static_cast<std::size_t>(r.truth->location)][static_cast<std::size_t>(r.report.location)]++;
  }
  return m;
}

ConfusionMatrix mode_confusion(std::span<const RunAnalysis> runs) {
  ConfusionMatrix m;
  m.labels.emplace_back("none");
  for (auto mode : faultlab::all_fault_modes()) m.labels.emplace_back(faultlab::mode_name(mode));
  const std::size_t n = m.labels.size();
  m.counts.assign(n, std::vector<std::size_t>(n, 0));
  auto idx = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(m.labels.begin(), m.labels.end(), name) - m.labels.begin());
  };
  for (const auto& r : runs) {
    if (!r.truth) continue;
    m.counts[idx(truth_mode_name(*r.truth))][idx(inferred_mode_name(r.report))]++;
  }
  return m;
}

double CampaignScore::location_accuracy() const {
  return faulted_runs ? static_cast<double>(location_correct) / static_cast<double>(faulted_runs) : 0.0;
}
double CampaignScore::mode_accuracy() const {
  return faulted_runs ? static_cast<double>(mode_correct) / static_cast<double>(faulted_runs) : 0.0;
}
double CampaignScore::false_positive_rate() const {
  return control_runs ? static_cast<double>(false_positives) / static_cast<double>(control_runs) : 0.0;
}

CampaignScore score_campaign(std::span<const RunAnalysis> runs) {
  CampaignScore s;
  for (const auto& r : runs) {
    if (!r.truth) continue;
    if (r.truth->location == faultlab::FaultLocation::None) {
      ++s.control_runs;
      if (r.report.location != faultlab::FaultLocation::None) ++s.false_positives;
      continue;
    }
    ++s.faulted_runs;
    const bool loc_ok = r.report.location == r.truth->location;
    if (loc_ok) ++s.location_correct;
    if (r.report.mode && r.truth->mode && *r.report.mode == *r.truth->mode) ++s.mode_correct;
    auto& pm = s.per_mode[truth_mode_name(*r.truth)];
    ++pm.first;
    if (loc_ok) ++pm.second;
  }
  return s;
}

std::string report_to_json(std::span<const RunAnalysis> runs, const RuleBase& rules, bool with_plots) {
  ordered_json j;
  j["rule_base"] = rules.name;
  j["run_count"] = runs.size();
  ordered_json arr = ordered_json::array();
  bool any_truth = false;
  for (const auto& r : runs) {
    const auto& d = r.report;
    ordered_json rj;
    rj["id"] = r.id;
    rj["telemetry"] = r.telemetry;
    rj["end_time_s"] = r.end_time;
    rj["truth"] = r.truth ? label_json(*r.truth) : ordered_json(nullptr);
    any_truth = any_truth || r.truth.has_value();
    rj["inferred"] = {{"location", faultlab::location_name(d.location)},
                      {"mode", d.mode ? ordered_json(faultlab::mode_name(*d.mode)) : ordered_json(nullptr)},
                      {"rule", d.rule.empty() ? ordered_json(nullptr) : ordered_json(d.rule)}};
    rj["onset_s"] = d.onset ? ordered_json(*d.onset) : ordered_json(nullptr);
    rj["mission_impact"] = mission_impact_name(d.mission);
    rj["platform_damage"] = platform_damage_name(d.platform);
    rj["development_trend"] = d.trend;
    rj["residual_capability"] = capability_name(d.capability);
    rj["glide_distance_km"] = d.glide_distance_km ? ordered_json(*d.glide_distance_km) : ordered_json(nullptr);
    if (with_plots) rj["plot"] = plot_file(r.id);
    arr.push_back(rj);
  }
  j["runs"] = arr;
  if (any_truth) {
    const auto score = score_campaign(runs);
    ordered_json s;
    s["faulted_runs"] = score.faulted_runs;
    s["control_runs"] = score.control_runs;
    s["location_accuracy"] = score.location_accuracy();
    s["mode_accuracy"] = score.mode_accuracy();
    s["false_positive_rate"] = score.false_positive_rate();
    ordered_json pm = ordered_json::object();
    for (const auto& [mode, v] : score.per_mode) {
      pm[mode] = {{"runs", v.first},
                  {"location_correct", v.second},
                  {"location_accuracy", static_cast<double>(v.second) / static_cast<double>(v.first)}};
    }
    s["per_mode"] = pm;
    s["location_confusion"] = confusion_json(location_confusion(runs));
    s["mode_confusion"] = confusion_json(mode_confusion(runs));
    j["summary"] = s;
  }
  return j.dump(2) + "\n";
}

void emit_report(std::span<const RunAnalysis> runs, const RuleBase& rules, const std::filesystem::path& out_dir,
                 bool plots) {
  if (runs.empty()) throw AnalysisError("nothing to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    os << text;
    if (!os) throw IoError("failed writing " + p.string());
  };
  if (plots) {
    std::filesystem::create_directories(out_dir / "plots", ec);
    if (ec) throw IoError("cannot create plot directory: " + ec.message());
    for (const auto& r : runs) write(out_dir / plot_file(r.id), render_svg(r.id, r.plot));
  }
  write(out_dir / "report.json", report_to_json(runs, rules, plots));
}

namespace {

struct Trace {
  const std::vector<double>* y;
  const char* colour;
  const char* name;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::string& title, const PlotSeries& s) {
  constexpr double width = 900.0;
  constexpr double panel_h = 140.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 50.0;
  constexpr double gap = 30.0;

  const std::vector<std::pair<std::string, std::vector<Trace>>> panels = {
      {"altitude [m]", {{&s.altitude, "#1f77b4", "altitude"}}},
      {"airspeed [m/s]", {{&s.airspeed, "#2ca02c", "airspeed"}}},
      {"attitude [deg]",
       {{&s.attitude[0], "#d62728", "roll"}, {&s.attitude[1], "#1f77b4", "pitch"}, {&s.attitude[2], "#7f7f7f", "yaw"}}},
      {"throttle [-]", {{&s.throttle, "#ff7f0e", "throttle"}}},
      {"elevator [deg]", {{&s.elevator_command, "#9467bd", "command"}, {&s.elevator_actual, "#8c564b", "actual"}}},
  };
  const double height = top + static_cast<double>(panels.size()) * (panel_h + gap) + 10.0;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(left) + "\" y=\"22\" font-size=\"14\">" + escape(title) + "</text>\n";
  if (s.t.empty()) return svg + "</svg>\n";

  const double t0 = s.t.front();
  const double t1 = std::max(s.t.back(), t0 + 1e-9);
  const double plot_w = width - left - right;
  double y0 = top;
  for (const auto& [label, traces] : panels) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& tr : traces) {
      for (double v : *tr.y) {
        if (std::isfinite(v)) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-9) {
      lo -= 0.5;
      hi += 0.5;
    }
    svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(plot_w) + "\" height=\"" +
           fmt(panel_h) + "\" fill=\"none\" stroke=\"#999\"/>\n";
    svg += "<text x=\"" + fmt(left) + "\" y=\"" + fmt(y0 - 6) + "\">" + escape(label) + "</text>\n";
    svg += "<text x=\"" + fmt(left - 4) + "\" y=\"" + fmt(y0 + 10) + "\" text-anchor=\"end\" fill=\"#555\">" +
           fmt(hi) + "</text>\n";
    svg += "<text x=\"" + fmt(left - 4) + "\" y=\"" + fmt(y0 + panel_h) + "\" text-anchor=\"end\" fill=\"#555\">" +
           fmt(lo) + "</text>\n";
    double legend_x = left + plot_w - 10.0;
    for (auto it = traces.rbegin(); it != traces.rend(); ++it) {
      svg += "<text x=\"" + fmt(legend_x) + "\" y=\"" + fmt(y0 - 6) + "\" text-anchor=\"end\" fill=\"" + it->colour +
             "\">" + it->name + "</text>\n";
      legend_x -= 60.0;
    }
    for (const auto& tr : traces) {
      svg += "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"";
      svg += tr.colour;
      svg += "\" points=\"";
      for (std::size_t i = 0; i < s.t.size() && i < tr.y->size(); ++i) {
        const double v = (*tr.y)[i];
        if (!std::isfinite(v)) continue;
        const double x = left + (s.t[i] - t0) / (t1 - t0) * plot_w;
        const double y = y0 + panel_h - (v - lo) / (hi - lo) * panel_h;
        svg += fmt(x) + "," + fmt(y) + " ";
      }
      svg += "\"/>\n";
    }
    y0 += panel_h + gap;
  }
  svg += "<text x=\"" + fmt(left) + "\" y=\"" + fmt(y0 - gap + 14) + "\">t = " + fmt(t0) + " s</text>\n";
  svg += "<text x=\"" + fmt(left + plot_w) + "\" y=\"" + fmt(y0 - gap + 14) + "\" text-anchor=\"end\">t = " + fmt(t1) +
         " s</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace uavlab::damage
