#pragma once

#include <span>
#include <string>
#include <vector>

namespace uavlab::flightdyn {

/// One breakpoint axis of a gridded table. Breakpoints strictly increase.
struct TableAxis {
  std::string name;
  std::vector<double> breakpoints;
};

/// N-dimensional table sampled on a rectilinear grid. Values are row-major
/// (last axis varies fastest). Lookups interpolate multilinearly and clamp
/// queries to the grid boundary; there is no extrapolation.
class GriddedTable {
 public:
  GriddedTable() = default;
  GriddedTable(std::vector<TableAxis> axes, std::vector<double> values);

  /// Single-node table holding a constant.
  static GriddedTable constant(double value);

  double lookup(std::span<const double> coords) const;
  double lookup(std::initializer_list<double> coords) const {
    return lookup(std::span<const double>(coords.begin(), coords.size()));
  }

  std::size_t rank() const { return axes_.size(); }
  const std::vector<TableAxis>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }

  /// Value stored at the node with the given per-axis indices.
  double node(std::span<const std::size_t> index) const;

  /// Largest/smallest breakpoint of the named axis; throws if absent.
  double axis_min(const std::string& name) const;
  double axis_max(const std::string& name) const;

 private:
  std::vector<TableAxis> axes_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

}  // namespace uavlab::flightdyn
