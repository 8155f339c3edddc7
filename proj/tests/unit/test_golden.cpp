#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uavlab/campaign/scenario.hpp"
#include "uavlab/campaign/simulation.hpp"
#include "uavlab/campaign/telemetry.hpp"

using namespace uavlab;
using namespace uavlab::campaign;
namespace fs = std::filesystem;

namespace {

// Short faulted run whose telemetry is pinned in the golden directory. Set
// UAVLAB_REGENERATE_GOLDEN=1 to rewrite the reference after an intended
// behaviour change.
Scenario golden_scenario() {
  return parse_scenario(R"({
    "name": "golden",
    "seed": 7,
    "duration_s": 6.0,
    "log_rate_hz": 20,
    "faults": [
      {"mode": "servo_damage", "start_s": 2.0, "duration_s": 2.0},
      {"mode": "imu_constant_deviation", "start_s": 3.0}
    ]
  })");
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

TEST(Golden, ShortFaultedRunMatchesReference) {
  const fs::path golden = fs::path(UAVLAB_GOLDEN_DIR) / "short_faulted_run.csv";
  std::ostringstream os;
  write_telemetry_csv(os, run_simulation(golden_scenario()).frames);
  const std::string current = os.str();

  if (std::getenv("UAVLAB_REGENERATE_GOLDEN")) {
    std::ofstream out(golden, std::ios::binary);
    out << current;
    GTEST_SKIP() << "regenerated " << golden;
  }

  std::ifstream in(golden, std::ios::binary);
  ASSERT_TRUE(in) << "missing " << golden;
  std::ostringstream ref;
  ref << in.rdbuf();

  const auto want = split_csv(ref.str());
  const auto got = split_csv(current);
  ASSERT_EQ(got.size(), want.size());
  ASSERT_EQ(got.front(), want.front());
  const auto& header = want.front();
  for (std::size_t r = 1; r < want.size(); ++r) {
    ASSERT_EQ(got[r].size(), want[r].size()) << "row " << r;
    for (std::size_t c = 0; c < want[r].size(); ++c) {
      double a = 0.0, b = 0.0;
      if (parse_number(want[r][c], a) && parse_number(got[r][c], b)) {
        ASSERT_NEAR(b, a, 1e-9) << "row " << r << " column " << header[c];
      } else {
        ASSERT_EQ(got[r][c], want[r][c]) << "row " << r << " column " << header[c];
      }
    }
  }
}
