#include "uavlab/flightdyn/aircraft.hpp"

#include <cmath>
#include <string>

#include "uavlab/common/error.hpp"
#include "uavlab/flightdyn/atmosphere.hpp"
#include "uavlab/flightdyn/propulsion.hpp"

namespace uavlab::flightdyn {

bool InertiaTensor::is_physical() const {
  return ixx > 0.0 && iyy > 0.0 && izz > 0.0 && ixx + iyy >= izz && iyy + izz >= ixx &&
         ixx + izz >= iyy;
}

ThrustTable::ThrustTable(GriddedTable table) : table_(std::move(table)) {
  const auto& axes = table_.axes();
  if (axes.size() != 3 || axes[0].name != "throttle" || axes[1].name != "airspeed" ||
      axes[2].name != "altitude") {
    throw ConfigError("thrust table axes must be (throttle, airspeed, altitude)");
  }
  if (axes[0].breakpoints.front() != 0.0 || axes[0].breakpoints.back() != 1.0) {
    throw ConfigError("thrust table throttle axis must span [0, 1]");
  }
  for (double v : table_.values()) {
    if (v < 0.0) throw ConfigError("thrust table values must be non-negative");
  }
}

double ThrustTable::thrust(double throttle, double airspeed, double altitude) const {
  return table_.lookup({throttle, airspeed, altitude});
}

ThrustTable default_thrust_table() {
  const std::vector<double> throttle = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> airspeed = {0, 10, 20, 25, 30, 40, 50, 60, 70, 80};
  const std::vector<double> altitude = {0, 1000, 3000};
  constexpr double kStaticThrust = 55.0;  // N at full throttle, sea level
  constexpr double kZeroThrustSpeed = 80.0;
  const double rho0 = standard_atmosphere(0.0).density;

  std::vector<double> values;
  for (double t : throttle) {
    for (double v : airspeed) {
      for (double h : altitude) {
        const double sigma = standard_atmosphere(h).density / rho0;
        values.push_back(t * kStaticThrust * (1.0 - v / kZeroThrustSpeed) * std::pow(sigma, 0.8));
      }
    }
  }
  return ThrustTable(GriddedTable(
      {{"throttle", throttle}, {"airspeed", airspeed}, {"altitude", altitude}}, values));
}

Vec3 propulsion_thrust(double throttle, double airspeed, double altitude,
                       const AircraftConfig& config) {
  if (!(throttle >= 0.0 && throttle <= 1.0)) {
    throw CommandError("throttle " + std::to_string(throttle) + " outside [0, 1]");
  }
  return {config.thrust_table.thrust(throttle, airspeed, altitude), 0.0, 0.0};
}

void AircraftConfig::validate() const {
  if (!(mass > 0.0)) throw ConfigError("aircraft mass must be positive");
  if (!(wing_area > 0.0 && mean_chord > 0.0 && wingspan > 0.0 && body_length > 0.0)) {
    throw ConfigError("aircraft areas and lengths must be positive");
  }
  if (!inertia.is_physical()) {
    throw ConfigError("inertia tensor must be positive with Ixx+Iyy>=Izz and permutations");
  }
  if (aero_tables.terms().empty()) throw ConfigError("aircraft has no aero tables");
  if (thrust_table.table().rank() != 3) throw ConfigError("aircraft has no thrust table");
}

InertiaTensor slender_body_inertia(const AirframeGeometry& g) {
  const double m_body = g.fuselage_mass_fraction * g.mass;
  const double m_front = g.front_wing_mass_fraction * g.mass;
  const double m_rear = g.rear_wing_mass_fraction * g.mass;
  const double r2 = g.body_radius * g.body_radius;
  const double l2 = g.body_length * g.body_length;

  InertiaTensor in;
  // Solid cylinder along x.
  in.ixx = 0.5 * m_body * r2;
  in.iyy = m_body * (3.0 * r2 + l2) / 12.0;
  in.izz = in.iyy;
  // Wings: thin rods along y at an x offset.
  for (auto [m, span, x] : {std::tuple{m_front, g.front_span, g.front_wing_station},
                            std::tuple{m_rear, g.rear_span, g.rear_wing_station}}) {
    const double spanwise = m * span * span / 12.0;
    const double offset = m * x * x;
    in.ixx += spanwise;
    in.iyy += offset;
    in.izz += spanwise + offset;
  }
  return in;
}

AircraftConfig default_aircraft() {
  AircraftConfig c;
  c.inertia = slender_body_inertia(AirframeGeometry{});
  c.aero_tables = default_aero_tables();
  c.thrust_table = default_thrust_table();
  return c;
}

}  // namespace uavlab::flightdyn
