#include "uavlab/flightdyn/table.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "uavlab/common/error.hpp"

namespace uavlab::flightdyn {
namespace {

constexpr std::size_t kMaxRank = 8;

}  // namespace

GriddedTable::GriddedTable(std::vector<TableAxis> axes, std::vector<double> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  if (axes_.size() > kMaxRank) {
    throw ConfigError("table rank " + std::to_string(axes_.size()) + " exceeds " +
                      std::to_string(kMaxRank));
  }
  std::size_t count = 1;
  strides_.assign(axes_.size(), 1);
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const auto& bp = axes_[i].breakpoints;
    if (bp.empty()) throw ConfigError("table axis '" + axes_[i].name + "' has no breakpoints");
    for (std::size_t k = 0; k < bp.size(); ++k) {
      if (!std::isfinite(bp[k]) || (k > 0 && !(bp[k] > bp[k - 1]))) {
        throw ConfigError("table axis '" + axes_[i].name +
                          "' breakpoints must be finite and strictly increasing");
      }
    }
    strides_[i] = count;
    count *= bp.size();
  }
  if (values_.size() != count) {
    throw ConfigError("table expects " + std::to_string(count) + " values, got " +
                      std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigError("table values must be finite");
  }
}

GriddedTable GriddedTable::constant(double value) { return GriddedTable({}, {value}); }

double GriddedTable::lookup(std::span<const double> coords) const {
  if (coords.size() != axes_.size()) {
    throw ConfigError("table lookup with " + std::to_string(coords.size()) +
                      " coordinates on a rank-" + std::to_string(axes_.size()) + " table");
  }
  const std::size_t rank = axes_.size();
  std::array<std::size_t, kMaxRank> lower{};
  std::array<double, kMaxRank> frac{};
  std::array<bool, kMaxRank> degenerate{};
  std::size_t base = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    const auto& bp = axes_[i].breakpoints;
    const double x = coords[i];
    if (bp.size() == 1 || !(x > bp.front())) {
      lower[i] = 0;
      degenerate[i] = true;
    } else if (!(x < bp.back())) {
      lower[i] = bp.size() - 1;
      degenerate[i] = true;
    } else {
      const auto it = std::upper_bound(bp.begin(), bp.end(), x);
      const std::size_t hi = static_cast<std::size_t>(it - bp.begin());
      lower[i] = hi - 1;
      frac[i] = (x - bp[hi - 1]) / (bp[hi] - bp[hi - 1]);
      degenerate[i] = frac[i] == 0.0;
    }
    base += lower[i] * strides_[i];
  }

  // Accumulate over the 2^k corners of the active (non-degenerate) axes.
  std::array<std::size_t, kMaxRank> active{};
  std::size_t n_active = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    if (!degenerate[i]) active[n_active++] = i;
  }
  if (n_active == 0) return values_[base];

  double result = 0.0;
  const std::size_t corners = std::size_t{1} << n_active;
  for (std::size_t c = 0; c < corners; ++c) {
    double weight = 1.0;
    std::size_t offset = base;
    for (std::size_t j = 0; j < n_active; ++j) {
      const std::size_t axis = active[j];
      if (c & (std::size_t{1} << j)) {
        weight *= frac[axis];
        offset += strides_[axis];
      } else {
        weight *= 1.0 - frac[axis];
      }
    }
    result += weight * values_[offset];
  }
  return result;
}

double GriddedTable::node(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw ConfigError("node index rank mismatch");
  std::size_t offset = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= axes_[i].breakpoints.size()) throw ConfigError("node index out of range");
    offset += index[i] * strides_[i];
  }
  return values_[offset];
}

double GriddedTable::axis_min(const std::string& name) const {
  for (const auto& a : axes_) {
    if (a.name == name) return a.breakpoints.front();
  }
  throw ConfigError("table has no axis '" + name + "'");
}

double GriddedTable::axis_max(const std::string& name) const {
  for (const auto& a : axes_) {
    if (a.name == name) return a.breakpoints.back();
  }
  throw ConfigError("table has no axis '" + name + "'");
}

}  // namespace uavlab::flightdyn
