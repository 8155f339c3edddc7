#include "uavlab/damage/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "uavlab/common/error.hpp"
#include "uavlab/common/units.hpp"

namespace uavlab::damage {

namespace {

constexpr double kGravity = 9.80665;
constexpr double kMetersPerDegree = 111320.0;
constexpr double kFrozenTolerance = 1e-9;  // deg

ChannelStats stats(std::span<const double> x) {
  ChannelStats s;
  if (x.empty()) return s;
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(x.size()));
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  s.range = *hi - *lo;
  return s;
}

// Least-squares slope of y against t.
double slope(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  const double tm = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(n);
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (t[i] - tm) * (y[i] - ym);
    den += (t[i] - tm) * (t[i] - tm);
  }
  return den > 0.0 ? num / den : 0.0;
}

std::vector<double> unwrap_degrees(std::vector<double> a) {
  for (std::size_t i = 1; i < a.size(); ++i) {
    double d = a[i] - a[i - 1];
    while (d > 180.0) {
      a[i] -= 360.0;
      d -= 360.0;
    }
    while (d < -180.0) {
      a[i] += 360.0;
      d += 360.0;
    }
  }
  return a;
}

struct Epoch {
  double t;
  double north;
  double east;
  double altitude;
  double speed;
};

// Distinct GPS messages in the window. Consecutive frames repeat the latest
// epoch, so a new epoch is recognised by a change in the reported values.
std::vector<Epoch> gps_epochs(std::span<const ObservableFrame> w) {
  std::vector<Epoch> out;
  const ObservableFrame* prev = nullptr;
  const ObservableFrame* ref = nullptr;  // local tangent-plane origin
  for (const auto& f : w) {
    if (!f.gps_received) {
      prev = nullptr;
      continue;
    }
    const bool fresh = prev == nullptr || f.latitude != prev->latitude || f.longitude != prev->longitude ||
                       f.gps_altitude != prev->gps_altitude || f.gps_speed != prev->gps_speed;
    prev = &f;
    if (!fresh) continue;
    if (!ref) ref = &f;
    const double coslat = std::cos(deg2rad(ref->latitude));
    out.push_back({f.t, (f.latitude - ref->latitude) * kMetersPerDegree,
                   (f.longitude - ref->longitude) * kMetersPerDegree * coslat, f.gps_altitude, f.gps_speed});
  }
  return out;
}

}  // namespace

ObservableFrame observe(const campaign::TelemetryFrame& f) {
  ObservableFrame o;
  o.t = f.t;
  o.attitude = {f.imu.attitude.roll, f.imu.attitude.pitch, f.imu.attitude.yaw};
  o.rates = {f.imu.rates.x(), f.imu.rates.y(), f.imu.rates.z()};
  o.accel = {f.imu.specific_force.x(), f.imu.specific_force.y(), f.imu.specific_force.z()};
  o.imu_healthy = f.imu.healthy;
  o.gps_received = f.gps.received;
  o.latitude = f.gps.latitude;
  o.longitude = f.gps.longitude;
  o.gps_altitude = f.gps.altitude;
  o.gps_speed = f.gps.ground_speed;
  o.satellites = f.gps.satellites;
  o.gps_fix = f.gps.fix_valid;
  o.airspeed = f.airspeed;
  o.phase = f.phase;
  o.command = {f.command.elevator, f.command.aileron, f.command.rudder};
  o.actual = {f.actual.elevator, f.actual.aileron, f.actual.rudder};
  o.throttle_command = f.command.throttle;
  o.throttle_actual = f.actual.throttle;
  return o;
}

std::vector<ObservableFrame> observe(std::span<const campaign::TelemetryFrame> frames) {
  std::vector<ObservableFrame> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(observe(f));
  return out;
}

Oscillation dominant_oscillation(std::span<const double> x, double sample_rate) {
  Oscillation o;
  const std::size_t n = x.size();
  if (n < 4 || !(sample_rate > 0.0)) return o;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
  const double b = slope(t, x);
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double tm = 0.5 * static_cast<double>(n - 1);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - xm - b * (t[i] - tm);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, d);
  std::size_t best = 0;
  double best_mag = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double mag = std::abs(spec[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  if (best == 0) return o;
  const bool nyquist = n % 2 == 0 && best == n / 2;
  o.frequency = static_cast<double>(best) * sample_rate / static_cast<double>(n);
  o.amplitude = (nyquist ? 1.0 : 2.0) * best_mag / static_cast<double>(n);
  // Residual floating-point noise on a constant signal is not an oscillation.
  if (o.amplitude < 1e-12) return Oscillation{};
  o.score = o.frequency * o.amplitude;
  return o;
}

std::vector<FeatureVector> extract_features(std::span<const ObservableFrame> frames, const FeatureConfig& cfg) {
  if (!(cfg.window > 0.0) || !(cfg.stride > 0.0)) throw AnalysisError("window and stride must be positive");
  if (frames.size() < 2) throw AnalysisError("telemetry too short for analysis");
  const double t0 = frames.front().t;
  const double t1 = frames.back().t;
  if (t1 - t0 < 2.0 * cfg.window) {
    throw AnalysisError("telemetry spans " + std::to_string(t1 - t0) + " s, need at least two " +
                        std::to_string(cfg.window) + " s windows");
  }
  const double sample_rate = static_cast<double>(frames.size() - 1) / (t1 - t0);

  std::vector<FeatureVector> out;
  std::size_t begin = 0;
  const double eps = 1e-9 * cfg.window;
  for (double ws = t0; ws + cfg.window <= t1 + eps; ws += cfg.stride) {
    const double we = ws + cfg.window;
    while (begin < frames.size() && frames[begin].t < ws - eps) ++begin;
    std::size_t end = begin;
    while (end < frames.size() && frames[end].t < we - eps) ++end;
    if (end - begin < 2) continue;
    const auto w = frames.subspan(begin, end - begin);
    const std::size_t n = w.size();

    FeatureVector fv;
    fv.t_start = ws;
    fv.t_end = we;
    fv.phase = w.back().phase;

    std::vector<double> t(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = w[i].t;

    std::array<std::vector<double>, 3> att;
    for (int a = 0; a < 3; ++a) {
      att[a].resize(n);
      for (std::size_t i = 0; i < n; ++i) att[a][i] = rad2deg(w[i].attitude[a]);
      if (a == 2) att[a] = unwrap_degrees(att[a]);
      fv.attitude[a] = stats(att[a]);
      fv.oscillation[a] = dominant_oscillation(att[a], sample_rate);
      for (std::size_t i = 0; i < n; ++i) buf[i] = rad2deg(w[i].rates[a]);
      fv.rates[a] = stats(buf);
    }
    {
      double acc = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = att[1][i] - 0.5 * (att[1][i - 1] + att[1][i + 1]);
        acc += r * r;
        ++cnt;
      }
      fv.pitch_burr = cnt ? std::sqrt(acc / static_cast<double>(cnt)) : 0.0;
    }

    double thr_sum = 0.0;
    double thr_min = w.front().throttle_command;
    double running_max = w.front().throttle_command;
    for (const auto& f : w) {
      thr_sum += f.throttle_command;
      thr_min = std::min(thr_min, f.throttle_command);
      running_max = std::max(running_max, f.throttle_command);
      if (f.throttle_command <= cfg.throttle_idle && running_max - f.throttle_command >= cfg.throttle_drop_threshold) {
        fv.throttle_drop = true;
      }
    }
    fv.throttle_mean = thr_sum / static_cast<double>(n);
    fv.throttle_min = thr_min;

    for (std::size_t i = 0; i < n; ++i) buf[i] = w[i].airspeed;
    fv.airspeed_mean = stats(buf).mean;
    fv.airspeed_trend = slope(t, buf);

    std::size_t received = 0;
    std::size_t fixes = 0;
    std::size_t healthy = 0;
    std::size_t zeros = 0;
    double sats_min = std::numeric_limits<double>::infinity();
    for (const auto& f : w) {
      if (f.gps_received) {
        ++received;
        sats_min = std::min(sats_min, static_cast<double>(f.satellites));
      }
      if (f.gps_received && f.gps_fix) ++fixes;
      if (f.imu_healthy) ++healthy;
      const bool all_zero = std::all_of(f.attitude.begin(), f.attitude.end(), [](double v) { return v == 0.0; }) &&
                            std::all_of(f.rates.begin(), f.rates.end(), [](double v) { return v == 0.0; }) &&
                            std::all_of(f.accel.begin(), f.accel.end(), [](double v) { return v == 0.0; });
      if (all_zero) ++zeros;
    }
    const double dn = static_cast<double>(n);
    fv.gps_received_fraction = static_cast<double>(received) / dn;
    fv.gps_fix_fraction = static_cast<double>(fixes) / dn;
    fv.gps_satellites_min = received ? sats_min : 0.0;
    fv.imu_healthy_fraction = static_cast<double>(healthy) / dn;
    fv.imu_zero_fraction = static_cast<double>(zeros) / dn;

    const auto epochs = gps_epochs(w);
    if (epochs.size() >= 2) {
      std::vector<double> et, ea;
      for (const auto& e : epochs) {
        et.push_back(e.t);
        ea.push_back(e.altitude);
      }
      fv.altitude_rate = slope(et, ea);

      std::vector<double> track_t, track, resid;
      for (std::size_t i = 1; i < epochs.size(); ++i) {
        const auto& a = epochs[i - 1];
        const auto& b = epochs[i];
        const double dt = b.t - a.t;
        const double dist = std::hypot(b.north - a.north, b.east - a.east);
        const double expected = 0.5 * (a.speed + b.speed) * dt;
        const double jump = std::max(0.0, dist - expected);
        fv.position_jump = std::max(fv.position_jump, jump);
        // Track from consecutive fixes; epochs with an unexplained jump are skipped.
        if (dist > 1.0 && jump < 0.5 * dist + 10.0) {
          const double course = rad2deg(std::atan2(b.east - a.east, b.north - a.north));
          track_t.push_back(b.t);
          track.push_back(course);
        }
      }
      if (!track.empty()) {
        track = unwrap_degrees(track);
        double sx = 0.0;
        double sy = 0.0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < track_t.size(); ++i) {
          // Measured yaw at the epoch time.
          while (k + 1 < n && w[k + 1].t <= track_t[i]) ++k;
          const double r = deg2rad(rad2deg(wrap_pi(w[k].attitude[2])) - track[i]);
          sx += std::cos(r);
          sy += std::sin(r);
        }
        fv.heading_residual = rad2deg(std::atan2(sy, sx));
        const double turn_rate = deg2rad(slope(track_t, track));
        const double implied_bank = rad2deg(std::atan(fv.airspeed_mean * turn_rate / kGravity));
        fv.bank_residual = fv.attitude[0].mean - implied_bank;
      }
    }

    bool all_cmd_frozen = true;
    bool all_act_frozen = true;
    for (int c = 0; c < 3; ++c) {
      std::vector<double> cmd(n), act(n), res(n);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cmd[i] = rad2deg(w[i].command[c]);
        act[i] = rad2deg(w[i].actual[c]);
        res[i] = act[i] - cmd[i];
        num += act[i] * cmd[i];
        den += cmd[i] * cmd[i];
      }
      auto& s = fv.surfaces[c];
      const auto rs = stats(res);
      const auto cs = stats(cmd);
      const auto as = stats(act);
      s.residual_mean = rs.mean;
      s.residual_std = rs.std;
      s.command_std = cs.std;
      s.actual_std = as.std;
      // A gain needs a command that is clearly away from zero.
      s.gain = den / dn > 0.25 ? num / den : 1.0;
      all_cmd_frozen = all_cmd_frozen && cs.range < kFrozenTolerance;
      all_act_frozen = all_act_frozen && as.range < kFrozenTolerance;
    }
    fv.command_frozen = all_cmd_frozen;
    fv.surface_stuck = all_act_frozen && !all_cmd_frozen;
    out.push_back(fv);
  }
  if (out.size() < 2) throw AnalysisError("telemetry too short for two analysis windows");
  return out;
}

namespace {

using Accessor = std::function<double(const FeatureVector&)>;

const std::vector<std::pair<std::string, Accessor>>& accessors() {
  static const std::vector<std::pair<std::string, Accessor>> table = [] {
    std::vector<std::pair<std::string, Accessor>> t;
    const char* att[3] = {"roll", "pitch", "yaw"};
    const char* rate[3] = {"p", "q", "r"};
    for (int a = 0; a < 3; ++a) {
      const std::string n = att[a];
      t.emplace_back(n + "_mean", [a](const FeatureVector& f) { return f.attitude[a].mean; });
      t.emplace_back(n + "_std", [a](const FeatureVector& f) { return f.attitude[a].std; });
      t.emplace_back(n + "_range", [a](const FeatureVector& f) { return f.attitude[a].range; });
      t.emplace_back(n + "_osc_freq", [a](const FeatureVector& f) { return f.oscillation[a].frequency; });
      t.emplace_back(n + "_osc_amp", [a](const FeatureVector& f) { return f.oscillation[a].amplitude; });
      t.emplace_back(n + "_osc_score", [a](const FeatureVector& f) { return f.oscillation[a].score; });
    }
    for (int a = 0; a < 3; ++a) {
      const std::string n = rate[a];
      t.emplace_back(n + "_mean", [a](const FeatureVector& f) { return f.rates[a].mean; });
      t.emplace_back(n + "_std", [a](const FeatureVector& f) { return f.rates[a].std; });
      t.emplace_back(n + "_range", [a](const FeatureVector& f) { return f.rates[a].range; });
    }
    t.emplace_back("pitch_burr", [](const FeatureVector& f) { return f.pitch_burr; });
    t.emplace_back("throttle_mean", [](const FeatureVector& f) { return f.throttle_mean; });
    t.emplace_back("throttle_min", [](const FeatureVector& f) { return f.throttle_min; });
    t.emplace_back("throttle_drop", [](const FeatureVector& f) { return f.throttle_drop ? 1.0 : 0.0; });
    t.emplace_back("airspeed_mean", [](const FeatureVector& f) { return f.airspeed_mean; });
    t.emplace_back("airspeed_trend", [](const FeatureVector& f) { return f.airspeed_trend; });
    t.emplace_back("altitude_rate", [](const FeatureVector& f) { return f.altitude_rate; });
    t.emplace_back("position_jump", [](const FeatureVector& f) { return f.position_jump; });
    t.emplace_back("heading_residual", [](const FeatureVector& f) { return f.heading_residual; });
    t.emplace_back("bank_residual", [](const FeatureVector& f) { return f.bank_residual; });
    t.emplace_back("gps_received_fraction", [](const FeatureVector& f) { return f.gps_received_fraction; });
    t.emplace_back("gps_fix_fraction", [](const FeatureVector& f) { return f.gps_fix_fraction; });
    t.emplace_back("gps_satellites_min", [](const FeatureVector& f) { return f.gps_satellites_min; });
    t.emplace_back("imu_healthy_fraction", [](const FeatureVector& f) { return f.imu_healthy_fraction; });
    t.emplace_back("imu_zero_fraction", [](const FeatureVector& f) { return f.imu_zero_fraction; });
    const char* surf[3] = {"elevator", "aileron", "rudder"};
    for (int c = 0; c < 3; ++c) {
      const std::string n = surf[c];
      t.emplace_back(n + "_residual_mean", [c](const FeatureVector& f) { return f.surfaces[c].residual_mean; });
      t.emplace_back(n + "_residual_std", [c](const FeatureVector& f) { return f.surfaces[c].residual_std; });
      t.emplace_back(n + "_actual_std", [c](const FeatureVector& f) { return f.surfaces[c].actual_std; });
      t.emplace_back(n + "_command_std", [c](const FeatureVector& f) { return f.surfaces[c].command_std; });
      t.emplace_back(n + "_gain", [c](const FeatureVector& f) { return f.surfaces[c].gain; });
    }
    t.emplace_back("command_frozen", [](const FeatureVector& f) { return f.command_frozen ? 1.0 : 0.0; });
    t.emplace_back("surface_stuck", [](const FeatureVector& f) { return f.surface_stuck ? 1.0 : 0.0; });
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : accessors()) n.push_back(name);
    return n;
  }();
  return names;
}

std::optional<double> feature_value(const FeatureVector& f, std::string_view name) {
  for (const auto& [n, fn] : accessors()) {
    if (n == name) return fn(f);
  }
  return std::nullopt;
}

}  // namespace uavlab::damage
