#pragma once

#include "uavlab/flightdyn/aero.hpp"
#include "uavlab/flightdyn/table.hpp"

namespace uavlab::flightdyn {

/// Principal moments of inertia; the products of inertia are identically zero
/// because the body x-z plane is a plane of symmetry.
struct InertiaTensor {
  double ixx = 0.0;
  double iyy = 0.0;
  double izz = 0.0;

  Vec3 diagonal() const { return {ixx, iyy, izz}; }
  /// Positive diagonal and the physical triangle inequalities.
  bool is_physical() const;
};

/// Maximum-available-thrust map over (throttle, airspeed m/s, altitude m).
class ThrustTable {
 public:
  ThrustTable() = default;
  explicit ThrustTable(GriddedTable table);

  double thrust(double throttle, double airspeed, double altitude) const;
  const GriddedTable& table() const { return table_; }
  double max_airspeed() const { return table_.axis_max("airspeed"); }

 private:
  GriddedTable table_;
};

ThrustTable default_thrust_table();

struct AircraftConfig {
  double mass = 9.0;            // kg, takeoff weight
  InertiaTensor inertia;
  double wing_area = 0.335;     // m^2, front 0.2 + rear 0.135
  double mean_chord = 0.21;     // m
  double wingspan = 1.67;       // m, front wing
  double body_length = 1.005;   // m
  AeroTables aero_tables;
  ThrustTable thrust_table;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Geometry used for the inertia estimate.
struct AirframeGeometry {
  double mass = 9.0;
  double body_length = 1.005;
  double body_radius = 0.06;
  double front_span = 1.67;
  double rear_span = 1.335;
  double front_wing_station = 0.25;  // m ahead of the c.g.
  double rear_wing_station = -0.30;
  double front_wing_mass_fraction = 0.11;
  double rear_wing_mass_fraction = 0.08;
  double fuselage_mass_fraction = 0.70;  // remainder is a point mass at the c.g.
};

/// Slender-body estimate: fuselage as a solid cylinder, wings as thin rods
/// along the span offset from the c.g.
InertiaTensor slender_body_inertia(const AirframeGeometry& g);

/// Defaults from the airframe shape parameters with the surrogate tables.
AircraftConfig default_aircraft();

}  // namespace uavlab::flightdyn
