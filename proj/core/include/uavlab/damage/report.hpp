#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavlab/campaign/campaign.hpp"
#include "uavlab/damage/rules.hpp"

namespace uavlab::damage {

struct GlideSample {
  double t = 0.0;
  double altitude = 0.0;      // m above ground
  double ground_speed = 0.0;  // m/s
};

/// Forward distance (km) covered from the first sample to touchdown, by the
/// trapezoid rule on ground speed. The touchdown instant is interpolated
/// between the samples that straddle zero altitude. When the record ends
/// above ground while still descending, the remainder is extrapolated at the
/// final sink rate and ground speed. Throws AnalysisError on an empty or
/// non-increasing record.
double glide_distance_estimate(std::span<const GlideSample> samples);

/// Decimated traces kept for plotting.
struct PlotSeries {
  std::vector<double> t;
  std::vector<double> altitude;
  std::vector<double> airspeed;
  std::array<std::vector<double>, 3> attitude;  // deg, measured
  std::vector<double> throttle;
  std::vector<double> elevator_command;
  std::vector<double> elevator_actual;
};

struct RunAnalysis {
  std::string id;
  std::string telemetry;
  std::optional<campaign::RunLabel> truth;
  DamageReport report;
  double end_time = 0.0;
  PlotSeries plot;
};

/// Observer-side features and classification, then effect estimates from
/// the recorded trajectory (glide distance for fallback glides).
DamageReport analyze_frames(std::span<const campaign::TelemetryFrame> frames, const RuleBase& rules,
                            const FeatureConfig& config = {});

RunAnalysis analyze_run(const std::string& id, const std::filesystem::path& telemetry, const RuleBase& rules,
                        const FeatureConfig& config = {});

/// Analyses every run in the index, `parallel` files at a time. Results
/// keep the index order.
std::vector<RunAnalysis> analyze_campaign(const campaign::CampaignIndex& index, const RuleBase& rules,
                                          unsigned parallel = 1, const FeatureConfig& config = {});

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> counts;  // [truth][inferred]

  std::size_t total() const;
  std::size_t diagonal() const;
};

ConfusionMatrix location_confusion(std::span<const RunAnalysis> runs);
ConfusionMatrix mode_confusion(std::span<const RunAnalysis> runs);

struct CampaignScore {
  std::size_t faulted_runs = 0;
  std::size_t location_correct = 0;
  std::size_t mode_correct = 0;
  std::size_t control_runs = 0;
  std::size_t false_positives = 0;  // control runs given a fault location
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_mode;  // mode -> (runs, location correct)

  double location_accuracy() const;
  double mode_accuracy() const;
  double false_positive_rate() const;
};

CampaignScore score_campaign(std::span<const RunAnalysis> runs);

std::string report_to_json(std::span<const RunAnalysis> runs, const RuleBase& rules, bool with_plots);

/// Writes `report.json` and, when `plots` is set, one SVG per run under
/// `plots/`. Throws IoError on write failure.
void emit_report(std::span<const RunAnalysis> runs, const RuleBase& rules, const std::filesystem::path& out_dir,
                 bool plots = true);

/// Stacked time-series panels as a standalone SVG document.
std::string render_svg(const std::string& title, const PlotSeries& series);

}  // namespace uavlab::damage
