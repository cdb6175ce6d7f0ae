#pragma once

#include <cstddef>
#include <vector>

namespace pbg {

/// Uniformly spaced, strictly increasing samples `start + i * step`.
/// A single-point grid has step 0.
struct UniformGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t size = 0;

  static UniformGrid span(double lo, double hi, std::size_t points);

  double operator[](std::size_t i) const { return start + static_cast<double>(i) * step; }
  double back() const { return (*this)[size - 1]; }
  double center() const { return start + 0.5 * static_cast<double>(size - 1) * step; }
  std::vector<double> values() const;

  /// Index of the node nearest to x, clamped to the grid.
  std::size_t nearest(double x) const;
};

/// Composite trapezoid weights (including the step) for a uniform grid.
/// A single-point grid gets weight 1.
std::vector<double> trapezoid_weights(const UniformGrid& grid);

}  // namespace pbg
