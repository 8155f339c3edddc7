#include "uavlab/campaign/telemetry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uavlab/common/error.hpp"
#include "uavlab/common/format.hpp"

namespace uavlab::campaign {

namespace {

constexpr std::string_view kSourceNames[] = {"gps", "dead_reckoning"};

std::string num(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string nav_source_name(avionics::NavSource s) { return std::string(kSourceNames[static_cast<int>(s)]); }

const std::vector<std::string>& telemetry_columns() {
  static const std::vector<std::string> cols = {
      "t",           "px",          "py",          "pz",           "u",
      "v",           "w",           "roll",        "pitch",        "yaw",
      "p",           "q",           "r",           "meas_roll",    "meas_pitch",
      "meas_yaw",    "meas_p",      "meas_q",      "meas_r",       "meas_ax",
      "meas_ay",     "meas_az",     "meas_imu_healthy", "meas_gps_lat", "meas_gps_lon",
      "meas_gps_alt", "meas_gps_speed", "meas_gps_sats", "meas_gps_fix", "meas_airspeed",
      "nav_source",  "phase",       "failsafe",    "cmd_elevator", "cmd_aileron",
      "cmd_rudder",  "act_elevator", "act_aileron", "act_rudder",  "throttle_cmd",
      "throttle_act", "fault_labels"};
  return cols;
}

void write_telemetry_csv(std::ostream& os, const std::vector<TelemetryFrame>& frames) {
  const auto& cols = telemetry_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& f : frames) {
    const bool rx = f.gps.received;
    os << num(f.t) << ',' << num(f.position.x()) << ',' << num(f.position.y()) << ',' << num(f.position.z()) << ','
       << num(f.velocity_body.x()) << ',' << num(f.velocity_body.y()) << ',' << num(f.velocity_body.z()) << ','
       << num(f.attitude.roll) << ',' << num(f.attitude.pitch) << ',' << num(f.attitude.yaw) << ','
       << num(f.rates.x()) << ',' << num(f.rates.y()) << ',' << num(f.rates.z()) << ','
       << num(f.imu.attitude.roll) << ',' << num(f.imu.attitude.pitch) << ',' << num(f.imu.attitude.yaw) << ','
       << num(f.imu.rates.x()) << ',' << num(f.imu.rates.y()) << ',' << num(f.imu.rates.z()) << ','
       << num(f.imu.specific_force.x()) << ',' << num(f.imu.specific_force.y()) << ','
       << num(f.imu.specific_force.z()) << ',' << (f.imu.healthy ? 1 : 0) << ','
       << (rx ? num(f.gps.latitude) : "") << ',' << (rx ? num(f.gps.longitude) : "") << ','
       << (rx ? num(f.gps.altitude) : "") << ',' << (rx ? num(f.gps.ground_speed) : "") << ','
       << f.gps.satellites << ',' << (f.gps.fix_valid ? 1 : 0) << ',' << num(f.airspeed) << ','
       << nav_source_name(f.nav_source) << ',' << phase_name(f.phase) << ','
       << autopilot::failsafe_name(f.failsafe) << ',' << num(f.command.elevator) << ','
       << num(f.command.aileron) << ',' << num(f.command.rudder) << ',' << num(f.actual.elevator) << ','
       << num(f.actual.aileron) << ',' << num(f.actual.rudder) << ',' << num(f.command.throttle) << ','
       << num(f.actual.throttle) << ',' << f.fault_labels << '\n';
  }
}

void write_telemetry_csv(const std::filesystem::path& path, const std::vector<TelemetryFrame>& frames) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write telemetry " + path.string());
  write_telemetry_csv(os, frames);
  if (!os) throw IoError("failed writing telemetry " + path.string());
}

std::vector<TelemetryFrame> read_telemetry_csv(std::istream& is) {
  const auto& cols = telemetry_columns();
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty telemetry file", 1, "");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header != cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i >= header.size() || header[i] != cols[i]) {
        throw ParseError("unexpected telemetry header at column " + std::to_string(i + 1), 1,
                         i < cols.size() ? cols[i] : "");
      }
    }
    throw ParseError("extra telemetry columns", 1, "");
  }

  std::vector<TelemetryFrame> frames;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) +
                           " fields, found " + std::to_string(cells.size()),
                       lineno, "");
    }
    std::size_t c = 0;
    auto value = [&](bool optional = false) {
      const std::string& cell = cells[c];
      const auto v = parse_double(cell);
      if (!v) {
        if (optional && cell.empty()) {
          ++c;
          return std::nan("");
        }
        throw ParseError("line " + std::to_string(lineno) + ": bad number in column " + cols[c], lineno, cols[c]);
      }
      ++c;
      return *v;
    };
    auto flag = [&]() { return value() != 0.0; };
    auto text = [&]() { return cells[c++]; };

    TelemetryFrame f;
    f.t = value();
    for (int i = 0; i < 3; ++i) f.position[i] = value();
    for (int i = 0; i < 3; ++i) f.velocity_body[i] = value();
    f.attitude.roll = value();
    f.attitude.pitch = value();
    f.attitude.yaw = value();
    for (int i = 0; i < 3; ++i) f.rates[i] = value();
    f.imu.time = f.t;
    f.imu.attitude.roll = value();
    f.imu.attitude.pitch = value();
    f.imu.attitude.yaw = value();
    for (int i = 0; i < 3; ++i) f.imu.rates[i] = value();
    for (int i = 0; i < 3; ++i) f.imu.specific_force[i] = value();
    f.imu.healthy = flag();
    f.gps.latitude = value(true);
    f.gps.longitude = value(true);
    f.gps.altitude = value(true);
    f.gps.ground_speed = value(true);
    f.gps.received = std::isfinite(f.gps.latitude);
    f.gps.satellites = static_cast<int>(value());
    f.gps.fix_valid = flag();
    f.airspeed = value();

    const std::size_t source_col = c;
    const std::string source = text();
    if (source == kSourceNames[0]) {
      f.nav_source = avionics::NavSource::Gps;
    } else if (source == kSourceNames[1]) {
      f.nav_source = avionics::NavSource::DeadReckoning;
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown nav source", lineno, cols[source_col]);
    }
    const std::string ph = text();
    const auto phase = parse_phase(ph);
    if (!phase) throw ParseError("line " + std::to_string(lineno) + ": unknown phase", lineno, "phase");
    f.phase = *phase;
    const std::string fs = text();
    bool fs_ok = false;
    for (auto k : {autopilot::FailsafeKind::Nominal, autopilot::FailsafeKind::ImuPositioning,
                   autopilot::FailsafeKind::LevelFlightFallback, autopilot::FailsafeKind::HoldLastRudder}) {
      if (autopilot::failsafe_name(k) == fs) {
        f.failsafe = k;
        fs_ok = true;
      }
    }
    if (!fs_ok) throw ParseError("line " + std::to_string(lineno) + ": unknown failsafe mode", lineno, "failsafe");
    f.command.elevator = value();
    f.command.aileron = value();
    f.command.rudder = value();
    f.actual.elevator = value();
    f.actual.aileron = value();
    f.actual.rudder = value();
    f.command.throttle = value();
    f.actual.throttle = value();
    f.fault_labels = text();
    if (!frames.empty() && !(f.t > frames.back().t)) {
      throw ParseError("line " + std::to_string(lineno) + ": time not strictly increasing", lineno, "t");
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<TelemetryFrame> read_telemetry_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open telemetry " + path.string());
  try {
    return read_telemetry_csv(is);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.field());
  }
}

}  // namespace uavlab::campaign
