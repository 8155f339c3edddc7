#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "uavlab/common/signals.hpp"
#include "uavlab/flightdyn/atmosphere.hpp"
#include "uavlab/flightdyn/state.hpp"
#include "uavlab/flightdyn/table.hpp"

namespace uavlab::flightdyn {

struct AircraftConfig;

/// Lift, drag and side force act in wind axes; roll, pitch and yaw moments in
/// body axes.
enum class AeroCoefficient { Lift, Drag, Side, Roll, Pitch, Yaw };
inline constexpr int kAeroCoefficientCount = 6;

/// Independent variables an aero term may be tabulated over or scaled by.
/// Angles and deflections are radians; rate variables are the normalised
/// rates p*b/2V, q*c/2V, r*b/2V.
enum class AeroVariable { One, Alpha, Beta, Elevator, Aileron, Rudder, RollRate, PitchRate, YawRate };
inline constexpr int kAeroVariableCount = 9;

std::string_view to_string(AeroCoefficient c);
std::string_view to_string(AeroVariable v);
AeroCoefficient parse_aero_coefficient(std::string_view name);
AeroVariable parse_aero_variable(std::string_view name);

/// One additive contribution: table(axes...) * multiplier.
struct AeroTerm {
  AeroCoefficient coefficient = AeroCoefficient::Lift;
  AeroVariable multiplier = AeroVariable::One;
  std::vector<AeroVariable> axes;
  GriddedTable table;
};

using AeroInputs = std::array<double, kAeroVariableCount>;
using AeroCoefficients = std::array<double, kAeroCoefficientCount>;

/// Coefficient build-up: every coefficient is the sum of its terms.
class AeroTables {
 public:
  AeroTables() = default;
  explicit AeroTables(std::vector<AeroTerm> terms);

  AeroCoefficients evaluate(const AeroInputs& in) const;
  const std::vector<AeroTerm>& terms() const { return terms_; }

 private:
  std::vector<AeroTerm> terms_;
};

AeroInputs make_aero_inputs(const AirData& air, const Vec3& rates, const SurfaceActual& surfaces,
                            const AircraftConfig& config);

/// Aerodynamic force and moment in body axes. Zero when the airspeed is zero.
Wrench aero_force_moment(const RigidBodyState& state, const SurfaceActual& surfaces,
                         const AirData& air, const AircraftConfig& config);

/// Documented surrogate coefficient set for a 9 kg tandem-wing UAV: linear
/// lift slope clamped at stall, quadratic drag polar, conventional
/// stability and control derivatives, lateral terms odd in sideslip.
AeroTables default_aero_tables();

}  // namespace uavlab::flightdyn
