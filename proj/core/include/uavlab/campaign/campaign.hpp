#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uavlab/campaign/simulation.hpp"
#include "uavlab/faultlab/fault.hpp"

namespace uavlab::campaign {

/// One row of a campaign matrix: a fault mode swept over injection phases
/// and seeds. Injection happens `offset` seconds after the phase is entered.
struct MatrixEntry {
  faultlab::FaultMode mode = faultlab::FaultMode::GpsDeception;
  std::string tag;  // optional suffix distinguishing parameter variants
  std::vector<Phase> phases;
  std::optional<faultlab::FaultParams> params;  // mode defaults when empty
  int seed_count = 5;
  double offset = 30.0;
  double duration = std::numeric_limits<double>::infinity();
};

struct CampaignMatrix {
  std::string name = "campaign";
  std::uint64_t first_seed = 1;
  int control_runs = 0;  // unfaulted runs, seeds first_seed, first_seed+1, ...
  std::vector<MatrixEntry> entries;

  std::size_t run_count() const;
  /// Throws ConstraintError when the matrix is empty or an entry is invalid.
  void validate() const;
};

/// Thirteen modes x {level flight, glide slope} x 5 seeds, plus 10 control runs.
CampaignMatrix standard_campaign_matrix();

CampaignMatrix parse_campaign_matrix(const std::string& text);
CampaignMatrix load_campaign_matrix(const std::filesystem::path& path);
std::string campaign_matrix_to_json(const CampaignMatrix& matrix);

/// Ground truth for a run. Control runs have location None and no mode.
struct RunLabel {
  faultlab::FaultLocation location = faultlab::FaultLocation::None;
  std::optional<faultlab::FaultMode> mode;
  std::optional<Phase> phase;
  double offset = 0.0;
};

struct PlannedRun {
  std::string id;
  RunLabel label;
  Scenario scenario;
};

/// Expands the matrix against the base scenario and validates every run
/// before anything executes. The error names the offending run.
std::vector<PlannedRun> plan_campaign(const CampaignMatrix& matrix, const Scenario& base);

struct IndexEntry {
  std::string id;
  RunLabel label;
  std::uint64_t seed = 0;
  std::string telemetry;  // relative to the index directory
  std::string summary;
  Termination termination = Termination::Duration;
  double end_time = 0.0;
};

struct CampaignIndex {
  std::string name;
  std::vector<IndexEntry> runs;
  std::filesystem::path root;  // directory holding index.json, not serialised
};

struct CampaignOptions {
  unsigned parallel = 1;
  std::optional<double> log_rate;
  std::function<void(const IndexEntry&)> on_run_done;  // called from worker threads, serialised
};

/// Runs every planned run and writes `runs/<id>.csv`, `runs/<id>.json` and
/// `index.json` below `out_dir`. Outputs do not depend on `parallel`.
CampaignIndex run_campaign(const CampaignMatrix& matrix, const Scenario& base, const std::filesystem::path& out_dir,
                           const CampaignOptions& options = {});

std::string campaign_index_to_json(const CampaignIndex& index);
void write_campaign_index(const std::filesystem::path& path, const CampaignIndex& index);
CampaignIndex read_campaign_index(const std::filesystem::path& path);

}  // namespace uavlab::campaign
