#include "uavlab/campaign/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "scenario_json.hpp"
#include "uavlab/common/error.hpp"

namespace uavlab::campaign {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string run_id(const MatrixEntry& e, Phase phase, std::uint64_t seed) {
  std::string id(faultlab::mode_name(e.mode));
  if (!e.tag.empty()) id += "+" + e.tag;
  id += "-";
  id += phase_name(phase);
  id += "-s" + std::to_string(seed);
  return id;
}

ordered_json label_json(const RunLabel& l) {
  ordered_json j;
  j["location"] = faultlab::location_name(l.location);
  j["mode"] = l.mode ? ordered_json(faultlab::mode_name(*l.mode)) : ordered_json(nullptr);
  j["phase"] = l.phase ? ordered_json(phase_name(*l.phase)) : ordered_json(nullptr);
  j["offset_s"] = l.offset;
  return j;
}

std::optional<Termination> parse_termination(std::string_view s) {
  for (auto t : {Termination::Duration, Termination::GroundImpact, Termination::Diverged}) {
    if (termination_name(t) == s) return t;
  }
  return std::nullopt;
}

}  // namespace

std::size_t CampaignMatrix::run_count() const {
  std::size_t n = static_cast<std::size_t>(std::max(control_runs, 0));
  for (const auto& e : entries) n += e.phases.size() * static_cast<std::size_t>(std::max(e.seed_count, 0));
  return n;
}

void CampaignMatrix::validate() const {
  if (run_count() == 0) throw ConstraintError("campaign matrix '" + name + "' has no runs");
  if (control_runs < 0) throw ConstraintError("control_runs must be non-negative");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string where = "entry " + std::to_string(i) + " (" + std::string(faultlab::mode_name(e.mode)) + ")";
    if (e.phases.empty()) throw ConstraintError(where + ": no injection phases");
    if (e.seed_count < 1) throw ConstraintError(where + ": seed count must be at least 1");
    if (!(e.offset >= 0.0 && std::isfinite(e.offset))) throw ConstraintError(where + ": offset must be >= 0");
    if (!(e.duration > 0.0)) throw ConstraintError(where + ": duration must be positive");
    if (e.params) {
      try {
        faultlab::validate_params(e.mode, *e.params);
      } catch (const ConstraintError& err) {
        throw ConstraintError(where + ": " + err.what());
      }
    }
  }
}

CampaignMatrix standard_campaign_matrix() {
  CampaignMatrix m;
  m.name = "standard";
  m.control_runs = 10;
  for (auto mode : faultlab::campaign_fault_modes()) {
    MatrixEntry e;
    e.mode = mode;
    e.phases = {Phase::LevelFlight, Phase::GlideSlope};
    m.entries.push_back(e);
  }
  return m;
}

CampaignMatrix parse_campaign_matrix(const std::string& text) {
  const json doc = parse_json_text(text, "campaign matrix");
  const JsonLineIndex index(text);
  const JsonNode root(doc, "", index);
  root.expect_object();
  root.only({"name", "first_seed", "control_runs", "seeds", "offset_s", "phases", "entries"});

  CampaignMatrix m;
  m.name = root.string("name", m.name);
  const long long first = root.integer("first_seed", 1);
  if (first < 0) root.fail_member("first_seed", "must be non-negative");
  m.first_seed = static_cast<std::uint64_t>(first);
  m.control_runs = static_cast<int>(root.integer("control_runs", 0));
  if (m.control_runs < 0) root.fail_member("control_runs", "must be non-negative");

  const int default_seeds = static_cast<int>(root.integer("seeds", 5));
  const double default_offset = root.number("offset_s", 30.0);
  auto parse_phases = [](const JsonNode& arr) {
    arr.expect_array();
    std::vector<Phase> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const JsonNode p = arr.element(i);
      const auto ph = parse_phase(p.string());
      if (!ph) p.fail("unknown phase '" + p.string() + "'");
      out.push_back(*ph);
    }
    return out;
  };
  std::vector<Phase> default_phases{Phase::LevelFlight, Phase::GlideSlope};
  if (root.has("phases")) default_phases = parse_phases(root.at("phases"));

  if (root.has("entries")) {
    const JsonNode entries = root.at("entries");
    entries.expect_array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const JsonNode n = entries.element(i);
      n.expect_object();
      n.only({"mode", "tag", "phases", "params", "seeds", "offset_s", "duration_s"});
      MatrixEntry e;
      const JsonNode mode_node = n.at("mode");
      const auto mode = faultlab::parse_mode(mode_node.string());
      if (!mode) mode_node.fail("unknown fault mode '" + mode_node.string() + "'");
      e.mode = *mode;
      e.tag = n.string("tag", "");
      e.phases = n.has("phases") ? parse_phases(n.at("phases")) : default_phases;
      if (n.has("params")) e.params = parse_fault_params(n.at("params"), e.mode);
      e.seed_count = static_cast<int>(n.integer("seeds", default_seeds));
      if (e.seed_count < 1) n.fail_member("seeds", "must be at least 1");
      e.offset = n.number("offset_s", default_offset);
      if (n.has("duration_s") && !n.at("duration_s").is_null()) e.duration = n.number("duration_s", e.duration);
      if (e.params) {
        try {
          faultlab::validate_params(e.mode, *e.params);
        } catch (const ConstraintError& err) {
          n.fail_member("params", err.what());
        }
      }
      m.entries.push_back(std::move(e));
    }
  }
  m.validate();
  return m;
}

CampaignMatrix load_campaign_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open campaign matrix " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_campaign_matrix(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.field());
  }
}

std::string campaign_matrix_to_json(const CampaignMatrix& m) {
  ordered_json j;
  j["name"] = m.name;
  j["first_seed"] = m.first_seed;
  j["control_runs"] = m.control_runs;
  ordered_json entries = ordered_json::array();
  for (const auto& e : m.entries) {
    ordered_json ej;
    ej["mode"] = faultlab::mode_name(e.mode);
    if (!e.tag.empty()) ej["tag"] = e.tag;
    ordered_json phases = ordered_json::array();
    for (auto p : e.phases) phases.push_back(phase_name(p));
    ej["phases"] = phases;
    if (e.params) ej["params"] = fault_params_json(e.mode, *e.params);
    ej["seeds"] = e.seed_count;
    ej["offset_s"] = e.offset;
    ej["duration_s"] = std::isfinite(e.duration) ? ordered_json(e.duration) : ordered_json(nullptr);
    entries.push_back(ej);
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::vector<PlannedRun> plan_campaign(const CampaignMatrix& matrix, const Scenario& base) {
  matrix.validate();
  std::vector<PlannedRun> runs;
  runs.reserve(matrix.run_count());
  std::set<std::string> ids;

  auto add = [&](PlannedRun run) {
    if (!ids.insert(run.id).second) throw ConstraintError("duplicate run id '" + run.id + "' (add a tag)");
    try {
      run.scenario.validate();
    } catch (const Error& e) {
      throw ConstraintError("run '" + run.id + "': " + e.what());
    }
    runs.push_back(std::move(run));
  };

  for (int i = 0; i < matrix.control_runs; ++i) {
    PlannedRun run;
    const std::uint64_t seed = matrix.first_seed + static_cast<std::uint64_t>(i);
    run.id = "control-s" + std::to_string(seed);
    run.scenario = base;
    run.scenario.seed = seed;
    run.scenario.faults = faultlab::FaultSchedule{};
    run.scenario.name = run.id;
    add(std::move(run));
  }

  for (const auto& e : matrix.entries) {
    for (Phase phase : e.phases) {
      for (int s = 0; s < e.seed_count; ++s) {
        const std::uint64_t seed = matrix.first_seed + static_cast<std::uint64_t>(s);
        PlannedRun run;
        run.id = run_id(e, phase, seed);
        run.label = RunLabel{faultlab::location_of(e.mode), e.mode, phase, e.offset};
        run.scenario = base;
        run.scenario.seed = seed;
        run.scenario.name = run.id;
        faultlab::FaultSpec spec;
        spec.mode = e.mode;
        spec.params = e.params.value_or(faultlab::default_params(e.mode));
        spec.anchor = faultlab::PhaseAnchor{phase, e.offset};
        spec.duration = e.duration;
        try {
          run.scenario.faults = faultlab::FaultSchedule({spec});
        } catch (const Error& err) {
          throw ConstraintError("run '" + run.id + "': " + err.what());
        }
        add(std::move(run));
      }
    }
  }
  return runs;
}

CampaignIndex run_campaign(const CampaignMatrix& matrix, const Scenario& base, const std::filesystem::path& out_dir,
                           const CampaignOptions& options) {
  std::vector<PlannedRun> runs = plan_campaign(matrix, base);
  if (options.log_rate) {
    for (auto& r : runs) {
      r.scenario.log_rate = *options.log_rate;
      r.scenario.validate();
    }
  }

  const std::filesystem::path run_dir = out_dir / "runs";
  std::filesystem::create_directories(run_dir);

  CampaignIndex index;
  index.name = matrix.name;
  index.root = out_dir;
  index.runs.resize(runs.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex mutex;

  auto worker = [&]() {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      const PlannedRun& run = runs[i];
      try {
        const RunResult result = run_simulation(run.scenario);
        write_run_outputs(run_dir / run.id, result, run.scenario);
        IndexEntry& entry = index.runs[i];
        entry.id = run.id;
        entry.label = run.label;
        entry.seed = run.scenario.seed;
        entry.telemetry = "runs/" + run.id + ".csv";
        entry.summary = "runs/" + run.id + ".json";
        entry.termination = result.summary.termination;
        entry.end_time = result.summary.final_state.time;
        if (options.on_run_done) {
          std::lock_guard<std::mutex> lock(mutex);
          options.on_run_done(entry);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.parallel, static_cast<unsigned>(runs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  write_campaign_index(out_dir / "index.json", index);
  return index;
}

std::string campaign_index_to_json(const CampaignIndex& index) {
  ordered_json j;
  j["name"] = index.name;
  j["run_count"] = index.runs.size();
  ordered_json runs = ordered_json::array();
  for (const auto& r : index.runs) {
    ordered_json rj;
    rj["id"] = r.id;
    rj["seed"] = r.seed;
    rj["label"] = label_json(r.label);
    rj["telemetry"] = r.telemetry;
    rj["summary"] = r.summary;
    rj["termination"] = termination_name(r.termination);
    rj["end_time_s"] = r.end_time;
    runs.push_back(rj);
  }
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

void write_campaign_index(const std::filesystem::path& path, const CampaignIndex& index) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << campaign_index_to_json(index);
  if (!os) throw IoError("failed writing " + path.string());
}

CampaignIndex read_campaign_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open campaign index " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const json doc = parse_json_text(text, path.string());
  const JsonLineIndex lines(text);
  const JsonNode root(doc, "", lines);
  root.expect_object();

  CampaignIndex index;
  index.name = root.string("name", "campaign");
  index.root = path.parent_path();
  const JsonNode runs = root.at("runs");
  runs.expect_array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const JsonNode r = runs.element(i);
    IndexEntry e;
    e.id = r.at("id").string();
    e.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
    e.telemetry = r.at("telemetry").string();
    e.summary = r.string("summary", "");
    const auto term = parse_termination(r.string("termination", "duration"));
    if (!term) r.fail_member("termination", "unknown termination");
    e.termination = *term;
    e.end_time = r.number("end_time_s", 0.0);
    const JsonNode l = r.at("label");
    const auto loc = faultlab::parse_location(l.at("location").string());
    if (!loc) l.fail_member("location", "unknown fault location");
    e.label.location = *loc;
    if (l.has("mode") && !l.at("mode").is_null()) {
      const auto mode = faultlab::parse_mode(l.at("mode").string());
      if (!mode) l.fail_member("mode", "unknown fault mode");
      e.label.mode = *mode;
    }
    if (l.has("phase") && !l.at("phase").is_null()) {
      const auto ph = parse_phase(l.at("phase").string());
      if (!ph) l.fail_member("phase", "unknown phase");
      e.label.phase = *ph;
    }
    e.label.offset = l.number("offset_s", 0.0);
    index.runs.push_back(std::move(e));
  }
  return index;
}

}  // namespace uavlab::campaign
