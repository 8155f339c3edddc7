#pragma once

#include <filesystem>
#include <iosfwd>

#include "uavlab/flightdyn/aero.hpp"
#include "uavlab/flightdyn/aircraft.hpp"

namespace uavlab::flightdyn {

// Plain-text grid format, one block per table:
//
//   uavlab-aero 1                      (or: uavlab-thrust 1)
//   term <coefficient> <multiplier>    (aero files only)
//   axis <name> <unit> <b0> <b1> ...   (zero or more; unit rad|deg|m|m/s|1)
//   data
//   <row-major values, last axis fastest, any whitespace>
//   end
//
// '#' starts a comment. Degree axes are converted to radians on load.

AeroTables read_aero_tables(std::istream& in);
AeroTables load_aero_tables(const std::filesystem::path& path);
void write_aero_tables(std::ostream& out, const AeroTables& tables);

ThrustTable read_thrust_table(std::istream& in);
ThrustTable load_thrust_table(const std::filesystem::path& path);
void write_thrust_table(std::ostream& out, const ThrustTable& table);

}  // namespace uavlab::flightdyn
