#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavlab/campaign/campaign.hpp"
#include "uavlab/campaign/simulation.hpp"
#include "uavlab/common/error.hpp"
#include "uavlab/damage/report.hpp"

namespace fs = std::filesystem;
using namespace uavlab;

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> log_rate;
  unsigned parallel = 1;
  std::string rules;
  bool no_plots = false;
};

damage::RuleBase rules_from(const CommonFlags& f) {
  return f.rules.empty() ? damage::default_rule_base() : damage::load_rule_base(f.rules);
}

void print_report_line(const std::string& id, const damage::DamageReport& r) {
  std::printf("%s: location=%s mode=%s", id.c_str(), std::string(faultlab::location_name(r.location)).c_str(),
              r.mode ? std::string(faultlab::mode_name(*r.mode)).c_str() : "none");
  if (r.onset) std::printf(" onset=%.2fs", *r.onset);
  std::printf(" mission=%s platform=%s capability=%s", std::string(damage::mission_impact_name(r.mission)).c_str(),
              std::string(damage::platform_damage_name(r.platform)).c_str(),
              std::string(damage::capability_name(r.capability)).c_str());
  if (r.glide_distance_km) std::printf(" glide=%.2fkm", *r.glide_distance_km);
  std::printf("\n");
}

int cmd_run(const std::string& scenario_path, const CommonFlags& f) {
  campaign::Scenario s = campaign::load_scenario(scenario_path);
  if (f.seed) s.seed = *f.seed;
  if (f.log_rate) s.log_rate = *f.log_rate;
  s.validate();

  fs::path stem;
  if (!f.out.empty()) {
    stem = fs::path(f.out) / s.name;
  } else if (s.telemetry_path) {
    stem = fs::path(*s.telemetry_path);
    stem.replace_extension();
  } else {
    stem = fs::path("out") / s.name;
  }
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());

  const auto result = campaign::run_simulation(s);
  campaign::write_run_outputs(stem, result, s);
  const auto& sum = result.summary;
  std::printf("%s seed=%llu termination=%s t=%.2fs frames=%zu altitude=%.1fm airspeed=%.1fm/s\n", sum.scenario.c_str(),
              static_cast<unsigned long long>(sum.seed), std::string(campaign::termination_name(sum.termination)).c_str(),
              sum.final_state.time, sum.frames, sum.final_state.altitude(), sum.final_state.airspeed());
  for (const auto& tr : sum.transitions) {
    std::printf("  %8.2f  %-8s %s -> %s\n", tr.t, tr.kind.c_str(), tr.from.c_str(), tr.to.c_str());
  }
  std::printf("telemetry: %s.csv\n", stem.string().c_str());
  return 0;
}

int cmd_campaign(const std::string& matrix_path, const std::string& base_path, const CommonFlags& f) {
  campaign::CampaignMatrix m =
      matrix_path == "standard" ? campaign::standard_campaign_matrix() : campaign::load_campaign_matrix(matrix_path);
  if (f.seed) m.first_seed = *f.seed;
  const campaign::Scenario base = campaign::load_scenario(base_path);
  const fs::path out = f.out.empty() ? fs::path("campaign_out") : fs::path(f.out);

  const std::size_t total = m.run_count();
  std::size_t done = 0;
  campaign::CampaignOptions opt;
  opt.parallel = f.parallel;
  opt.log_rate = f.log_rate;
  opt.on_run_done = [&](const campaign::IndexEntry& e) {
    ++done;
    std::printf("[%zu/%zu] %s %s t=%.1fs\n", done, total, e.id.c_str(),
                std::string(campaign::termination_name(e.termination)).c_str(), e.end_time);
    std::fflush(stdout);
  };
  const auto index = campaign::run_campaign(m, base, out, opt);
  std::printf("%zu runs written; index: %s\n", index.runs.size(), (out / "index.json").string().c_str());
  return 0;
}

int cmd_analyze(const std::vector<std::string>& files, const CommonFlags& f) {
  const auto rules = rules_from(f);
  std::vector<damage::RunAnalysis> runs;
  for (const auto& file : files) {
    auto a = damage::analyze_run(fs::path(file).stem().string(), file, rules);
    print_report_line(a.id, a.report);
    runs.push_back(std::move(a));
  }
  if (!f.out.empty()) {
    damage::emit_report(runs, rules, f.out, !f.no_plots);
    std::printf("report: %s\n", (fs::path(f.out) / "report.json").string().c_str());
  }
  return 0;
}

int cmd_report(const std::string& index_path, const CommonFlags& f) {
  const auto rules = rules_from(f);
  const auto index = campaign::read_campaign_index(index_path);
  const auto runs = damage::analyze_campaign(index, rules, f.parallel);
  const fs::path out = f.out.empty() ? index.root / "report" : fs::path(f.out);
  damage::emit_report(runs, rules, out, !f.no_plots);

  const auto score = damage::score_campaign(runs);
  std::printf("%zu runs analysed\n", runs.size());
  std::printf("location accuracy: %.1f%% (%zu/%zu faulted runs)\n", 100.0 * score.location_accuracy(),
              score.location_correct, score.faulted_runs);
  std::printf("mode accuracy:     %.1f%% (%zu/%zu)\n", 100.0 * score.mode_accuracy(), score.mode_correct,
              score.faulted_runs);
  std::printf("false positives:   %zu/%zu control runs\n", score.false_positives, score.control_runs);
  for (const auto& [mode, v] : score.per_mode) {
    std::printf("  %-26s %zu/%zu\n", mode.c_str(), v.second, v.first);
  }
  std::printf("report: %s\n", (out / "report.json").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-wing UAV fault-injection lab: simulate, inject faults, run campaigns, analyse damage"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto add_out = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--out", flags.out, what);
  };
  auto add_parallel = [&](CLI::App* sub) {
    sub->add_option("--parallel", flags.parallel, "Worker threads")->check(CLI::Range(1u, 256u));
  };
  auto add_rules = [&](CLI::App* sub) {
    sub->add_option("--rules", flags.rules, "Rule-base file (built-in defaults when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_flag("--no-plots", flags.no_plots, "Skip SVG plot output");
  };

  std::string scenario;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write telemetry plus a run summary");
  run->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", flags.seed, "Override the scenario seed");
  run->add_option("--log-rate", flags.log_rate, "Telemetry rate in Hz")->check(CLI::PositiveNumber);
  add_out(run, "Output directory (default: scenario output path or ./out)");

  std::string matrix;
  std::string base;
  auto* camp = app.add_subcommand("campaign", "Run a fault matrix against a base scenario");
  camp->add_option("matrix", matrix, "Campaign matrix file, or 'standard' for the built-in matrix")->required();
  camp->add_option("base", base, "Base scenario file")->required()->check(CLI::ExistingFile);
  camp->add_option("--seed", flags.seed, "First seed of the sweep");
  camp->add_option("--log-rate", flags.log_rate, "Telemetry rate in Hz")->check(CLI::PositiveNumber);
  add_out(camp, "Output directory (default: ./campaign_out)");
  add_parallel(camp);

  std::vector<std::string> files;
  auto* analyze = app.add_subcommand("analyze", "Classify faults and damage from telemetry files");
  analyze->add_option("telemetry", files, "Telemetry CSV files")->required()->check(CLI::ExistingFile);
  add_out(analyze, "Write report.json and plots to this directory");
  add_rules(analyze);

  std::string index;
  auto* report = app.add_subcommand("report", "Analyse a campaign index and write the damage report");
  report->add_option("index", index, "Campaign index.json")->required()->check(CLI::ExistingFile);
  add_out(report, "Output directory (default: <index dir>/report)");
  add_parallel(report);
  add_rules(report);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, flags);
    if (*camp) return cmd_campaign(matrix, base, flags);
    if (*analyze) return cmd_analyze(files, flags);
    if (*report) return cmd_report(index, flags);
  } catch (const uavlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
