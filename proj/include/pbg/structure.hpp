#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pbg/materials.hpp"

namespace pbg {

using Vec3c = std::array<std::complex<double>, 3>;

/// Second-order nonlinear tensor d_{abc} in pm/V, indices a,b,c ∈ {x,y,z}.
/// The first index couples the pump, the second the signal, the third the idler.
struct Chi2Tensor {
  std::array<double, 27> d{};

  /// Only d_xxx set: couples TE pump, TE signal and TE idler.
  static Chi2Tensor te_only(double d_eff);

  double& at(int a, int b, int c) { return d[static_cast<std::size_t>(9 * a + 3 * b + c)]; }
  double at(int a, int b, int c) const { return d[static_cast<std::size_t>(9 * a + 3 * b + c)]; }
  double max_abs() const;
  bool is_zero() const;

  /// d : e_p e_s e_i
  std::complex<double> contract(const Vec3c& pump, const Vec3c& signal, const Vec3c& idler) const;

  Chi2Tensor scaled(double factor) const;

  friend bool operator==(const Chi2Tensor&, const Chi2Tensor&) = default;
};

struct Layer {
  Material material;
  double thickness_nm = 0.0;
  Chi2Tensor chi2;

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Layers l = 1..N between two semi-infinite ambient media. Region 0 is the
/// left ambient, region N+1 the right one. The first layer starts at z0.
struct Stack {
  Material ambient_left = vacuum();
  std::vector<Layer> layers;
  Material ambient_right = vacuum();
  double z0_nm = 0.0;

  std::size_t size() const { return layers.size(); }
  std::size_t regions() const { return layers.size() + 2; }

  /// Medium of region r (0 = left ambient, N+1 = right ambient).
  const Material& region_material(std::size_t r) const;
  /// Thickness of region r; zero for the ambients.
  double region_thickness(std::size_t r) const;

  /// Throws ConfigError on an empty stack, non-positive thickness or
  /// non-finite tensor entries.
  void validate() const;

  friend bool operator==(const Stack&, const Stack&) = default;
};

/// z_0 … z_N, strictly increasing.
std::vector<double> boundary_positions(const Stack& stack);
double total_thickness(const Stack& stack);

/// Repeats `cell` `repetitions` times; with `terminate_with_first` one extra
/// copy of cell[0] closes the stack (2k+1 layers from a two-layer cell).
Stack build_periodic(const std::vector<Layer>& cell, std::size_t repetitions, bool terminate_with_first,
                     Material ambient_left = vacuum(), Material ambient_right = vacuum());

Stack parse_stack(const nlohmann::json& doc, const MaterialRegistry& registry,
                  const std::string& source = "<stack>");
Stack load_stack(const std::filesystem::path& path, const MaterialRegistry& registry);

/// Explicit-layer form of the stack file (periodic blocks expanded).
nlohmann::json to_json(const Stack& stack);

/// Stable 64-bit FNV-1a digest of the stack geometry and the dispersion of
/// every referenced material.
std::uint64_t stack_hash(const Stack& stack);

}  // namespace pbg
