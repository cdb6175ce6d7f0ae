#include "pbg/grid.hpp"

#include <algorithm>
#include <cmath>

#include "pbg/error.hpp"

namespace pbg {

UniformGrid UniformGrid::span(double lo, double hi, std::size_t points) {
  if (points == 0) throw ConfigError("grid must have at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("grid bounds must be finite");
  if (points == 1) return {lo, 0.0, 1};
  if (!(hi > lo)) throw ConfigError("grid span must be positive");
  return {lo, (hi - lo) / static_cast<double>(points - 1), points};
}

std::vector<double> UniformGrid::values() const {
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = (*this)[i];
  return out;
}

std::size_t UniformGrid::nearest(double x) const {
  if (size <= 1 || step == 0.0) return 0;
  const double pos = std::round((x - start) / step);
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), size - 1);
}

std::vector<double> trapezoid_weights(const UniformGrid& grid) {
  if (grid.size == 1) return {1.0};
  std::vector<double> w(grid.size, grid.step);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace pbg
