#include "uavlab/flightdyn/aero.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uavlab/common/error.hpp"
#include "uavlab/common/units.hpp"
#include "uavlab/flightdyn/aircraft.hpp"

namespace uavlab::flightdyn {
namespace {

constexpr std::array<std::string_view, kAeroCoefficientCount> kCoefficientNames = {
    "CL", "CD", "CY", "Cl", "Cm", "Cn"};
constexpr std::array<std::string_view, kAeroVariableCount> kVariableNames = {
    "one", "alpha", "beta", "elevator", "aileron", "rudder", "phat", "qhat", "rhat"};

std::size_t index_of(AeroVariable v) { return static_cast<std::size_t>(v); }

std::vector<double> degree_range(int from, int to, int step) {
  std::vector<double> out;
  for (int d = from; d <= to; d += step) out.push_back(deg2rad(d));
  return out;
}

AeroTerm constant_term(AeroCoefficient c, AeroVariable multiplier, double value) {
  return AeroTerm{c, multiplier, {}, GriddedTable::constant(value)};
}

}  // namespace

std::string_view to_string(AeroCoefficient c) { return kCoefficientNames[static_cast<int>(c)]; }
std::string_view to_string(AeroVariable v) { return kVariableNames[static_cast<int>(v)]; }

AeroCoefficient parse_aero_coefficient(std::string_view name) {
  for (int i = 0; i < kAeroCoefficientCount; ++i) {
    if (kCoefficientNames[i] == name) return static_cast<AeroCoefficient>(i);
  }
  throw ConfigError("unknown aero coefficient '" + std::string(name) + "'");
}

AeroVariable parse_aero_variable(std::string_view name) {
  for (int i = 0; i < kAeroVariableCount; ++i) {
    if (kVariableNames[i] == name) return static_cast<AeroVariable>(i);
  }
  throw ConfigError("unknown aero variable '" + std::string(name) + "'");
}

AeroTables::AeroTables(std::vector<AeroTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.axes.size() != t.table.rank()) {
      throw ConfigError("aero term for " + std::string(to_string(t.coefficient)) +
                        " declares " + std::to_string(t.axes.size()) + " axes but table has rank " +
                        std::to_string(t.table.rank()));
    }
    for (AeroVariable a : t.axes) {
      if (a == AeroVariable::One) throw ConfigError("'one' cannot be a table axis");
    }
  }
}

AeroCoefficients AeroTables::evaluate(const AeroInputs& in) const {
  AeroCoefficients out{};
  std::array<double, 8> coords{};
  for (const auto& term : terms_) {
    const std::size_t n = term.axes.size();
    for (std::size_t i = 0; i < n; ++i) coords[i] = in[index_of(term.axes[i])];
    const double value = term.table.lookup(std::span<const double>(coords.data(), n));
    out[static_cast<std::size_t>(term.coefficient)] += value * in[index_of(term.multiplier)];
  }
  return out;
}

AeroInputs make_aero_inputs(const AirData& air, const Vec3& rates, const SurfaceActual& surfaces,
                            const AircraftConfig& config) {
  AeroInputs in{};
  in[index_of(AeroVariable::One)] = 1.0;
  in[index_of(AeroVariable::Alpha)] = air.alpha;
  in[index_of(AeroVariable::Beta)] = air.beta;
  in[index_of(AeroVariable::Elevator)] = surfaces.elevator;
  in[index_of(AeroVariable::Aileron)] = surfaces.aileron;
  in[index_of(AeroVariable::Rudder)] = surfaces.rudder;
  if (air.airspeed > 1e-9) {
    const double half_inv_v = 0.5 / air.airspeed;
    in[index_of(AeroVariable::RollRate)] = rates.x() * config.wingspan * half_inv_v;
    in[index_of(AeroVariable::PitchRate)] = rates.y() * config.mean_chord * half_inv_v;
    in[index_of(AeroVariable::YawRate)] = rates.z() * config.wingspan * half_inv_v;
  }
  return in;
}

Wrench aero_force_moment(const RigidBodyState& state, const SurfaceActual& surfaces,
                         const AirData& air, const AircraftConfig& config) {
  Wrench w;
  if (!(air.airspeed > 1e-9)) return w;
  const AeroCoefficients c =
      config.aero_tables.evaluate(make_aero_inputs(air, state.angular_rates, surfaces, config));
  const double qbar_s = 0.5 * air.density * air.airspeed * air.airspeed * config.wing_area;

  const double drag = qbar_s * c[static_cast<int>(AeroCoefficient::Drag)];
  const double side = qbar_s * c[static_cast<int>(AeroCoefficient::Side)];
  const double lift = qbar_s * c[static_cast<int>(AeroCoefficient::Lift)];

  // Wind axes -> body axes.
  const double ca = std::cos(air.alpha), sa = std::sin(air.alpha);
  const double cb = std::cos(air.beta), sb = std::sin(air.beta);
  const double fx_w = -drag, fy_w = side, fz_w = -lift;
  w.force.x() = ca * cb * fx_w - ca * sb * fy_w - sa * fz_w;
  w.force.y() = sb * fx_w + cb * fy_w;
  w.force.z() = sa * cb * fx_w - sa * sb * fy_w + ca * fz_w;

  w.moment.x() = qbar_s * config.wingspan * c[static_cast<int>(AeroCoefficient::Roll)];
  w.moment.y() = qbar_s * config.mean_chord * c[static_cast<int>(AeroCoefficient::Pitch)];
  w.moment.z() = qbar_s * config.wingspan * c[static_cast<int>(AeroCoefficient::Yaw)];
  return w;
}

AeroTables default_aero_tables() {
  using C = AeroCoefficient;
  using V = AeroVariable;

  const std::vector<double> alpha = degree_range(-20, 25, 1);
  const std::vector<double> beta = degree_range(-20, 20, 5);
  const std::vector<double> elevator = degree_range(-25, 25, 5);

  constexpr double kCl0 = 0.10;
  constexpr double kClAlpha = 5.0;  // per rad
  constexpr double kClMax = 1.2;
  constexpr double kClMin = -0.8;
  constexpr double kCd0 = 0.025;
  constexpr double kInducedDrag = 0.045;
  constexpr double kSideslipDrag = 0.25;
  constexpr double kElevatorDrag = 0.30;
  constexpr double kCm0 = -0.02;
  constexpr double kCmAlpha = -0.9;

  std::vector<double> cl_alpha, cm_alpha, cd_alpha_beta, cd_elevator;
  for (double a : alpha) {
    const double cl_linear = kCl0 + kClAlpha * a;
    cl_alpha.push_back(std::clamp(cl_linear, kClMin, kClMax));
    cm_alpha.push_back(kCm0 + kCmAlpha * a);
    for (double b : beta) {
      cd_alpha_beta.push_back(kCd0 + kInducedDrag * cl_linear * cl_linear + kSideslipDrag * b * b);
    }
  }
  for (double de : elevator) cd_elevator.push_back(kElevatorDrag * de * de);

  std::vector<AeroTerm> terms;
  terms.push_back({C::Lift, V::One, {V::Alpha}, GriddedTable({{"alpha", alpha}}, cl_alpha)});
  terms.push_back(constant_term(C::Lift, V::Elevator, 0.35));
  terms.push_back(constant_term(C::Lift, V::PitchRate, 6.0));

  terms.push_back({C::Drag, V::One, {V::Alpha, V::Beta},
                   GriddedTable({{"alpha", alpha}, {"beta", beta}}, cd_alpha_beta)});
  terms.push_back({C::Drag, V::One, {V::Elevator},
                   GriddedTable({{"elevator", elevator}}, cd_elevator)});

  terms.push_back(constant_term(C::Side, V::Beta, -0.35));
  terms.push_back(constant_term(C::Side, V::Rudder, 0.12));

  terms.push_back(constant_term(C::Roll, V::Beta, -0.03));
  terms.push_back(constant_term(C::Roll, V::RollRate, -0.45));
  terms.push_back(constant_term(C::Roll, V::YawRate, 0.20));
  terms.push_back(constant_term(C::Roll, V::Aileron, 0.18));
  terms.push_back(constant_term(C::Roll, V::Rudder, 0.005));

  terms.push_back({C::Pitch, V::One, {V::Alpha}, GriddedTable({{"alpha", alpha}}, cm_alpha)});
  terms.push_back(constant_term(C::Pitch, V::Elevator, -1.3));
  terms.push_back(constant_term(C::Pitch, V::PitchRate, -14.0));

  terms.push_back(constant_term(C::Yaw, V::Beta, 0.07));
  terms.push_back(constant_term(C::Yaw, V::RollRate, -0.03));
  terms.push_back(constant_term(C::Yaw, V::YawRate, -0.12));
  terms.push_back(constant_term(C::Yaw, V::Aileron, -0.005));
  terms.push_back(constant_term(C::Yaw, V::Rudder, -0.06));
  return AeroTables(std::move(terms));
}

}  // namespace uavlab::flightdyn
