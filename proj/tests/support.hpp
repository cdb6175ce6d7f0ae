#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "pbg/materials.hpp"
#include "pbg/structure.hpp"

namespace pbg::testing {

inline std::filesystem::path data_dir() { return std::filesystem::path(PBG_SOURCE_DIR) / "data"; }

inline Material constant_material(const std::string& name, double n) { return {name, DispersionModel::constant(n)}; }

inline Layer layer(const Material& m, double thickness, double d_eff = 0.0) {
  Layer l{m, thickness, {}};
  if (d_eff != 0.0) l.chi2 = Chi2Tensor::te_only(d_eff);
  return l;
}

inline MaterialRegistry bundled_materials() { return load_materials(data_dir() / "materials.json"); }

inline Stack bundled_stack() { return load_stack(data_dir() / "gan_aln_stack.json", bundled_materials()); }

inline Stack bundled_slab() { return load_stack(data_dir() / "gan_slab_stack.json", bundled_materials()); }

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::path(PBG_BINARY_DIR) / "test-scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pbg::testing
