#include <fstream>

#include "json.hpp"
#include "uavlab/campaign/simulation.hpp"
#include "uavlab/common/error.hpp"

namespace uavlab::campaign {

std::string summary_to_json(const RunSummary& s, const Scenario& scenario) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = s.scenario;
  j["seed"] = s.seed;
  j["termination"] = termination_name(s.termination);
  if (!s.message.empty()) j["message"] = s.message;
  const auto& f = s.final_state;
  const auto e = f.euler();
  j["final_state"] = {{"t", f.time},
                      {"north_m", f.position_ned.x()},
                      {"east_m", f.position_ned.y()},
                      {"altitude_m", f.altitude()},
                      {"airspeed_mps", f.airspeed()},
                      {"roll_deg", rad2deg(e.roll)},
                      {"pitch_deg", rad2deg(e.pitch)},
                      {"yaw_deg", rad2deg(e.yaw)}};
  j["initial_airspeed_mps"] = s.initial_airspeed;
  ordered_json tr = ordered_json::array();
  for (const auto& t : s.transitions) {
    tr.push_back({{"t", t.t}, {"kind", t.kind}, {"from", t.from}, {"to", t.to}});
  }
  j["transitions"] = tr;
  j["frames"] = s.frames;
  j["scenario_definition"] = ordered_json::parse(scenario_to_json(scenario));
  return j.dump(2) + "\n";
}

void write_run_outputs(const std::filesystem::path& stem, const RunResult& result, const Scenario& scenario) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  std::filesystem::path csv = stem;
  csv += ".csv";
  std::filesystem::path meta = stem;
  meta += ".json";
  write_telemetry_csv(csv, result.frames);
  std::ofstream os(meta, std::ios::binary);
  if (!os) throw IoError("cannot write " + meta.string());
  os << summary_to_json(result.summary, scenario);
  if (!os) throw IoError("failed writing " + meta.string());
}

}  // namespace uavlab::campaign
