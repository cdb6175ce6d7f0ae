#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pbg {

enum class DispersionKind { constant, sellmeier, tabulated };

/// One resonance term B λ² / (λ² − C) of a Sellmeier expansion, C in µm².
struct SellmeierTerm {
  double b = 0.0;
  double c_um2 = 0.0;

  friend bool operator==(const SellmeierTerm&, const SellmeierTerm&) = default;
};

/// Closed wavelength interval in nm.
struct WavelengthRange {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double wavelength_nm) const { return wavelength_nm >= lo && wavelength_nm <= hi; }

  friend bool operator==(const WavelengthRange&, const WavelengthRange&) = default;
};

/// Real refractive index n(λ) of a lossless isotropic medium.
///
/// Sellmeier form: n² = offset + Σ_k B_k λ² / (λ² − C_k) with λ in µm.
/// Tabulated form: linear interpolation between (λ_nm, n) samples.
class DispersionModel {
 public:
  static DispersionModel constant(double index, WavelengthRange range = {0.0, 1e12});
  static DispersionModel sellmeier(double offset, std::vector<SellmeierTerm> terms, WavelengthRange range);
  /// `range` defaults to the table extent; it must lie inside it.
  static DispersionModel tabulated(std::vector<std::pair<double, double>> table);
  static DispersionModel tabulated(std::vector<std::pair<double, double>> table, WavelengthRange range);

  DispersionKind kind() const { return kind_; }
  const WavelengthRange& valid_range() const { return range_; }
  double constant_index() const { return constant_; }
  double sellmeier_offset() const { return constant_; }
  const std::vector<SellmeierTerm>& sellmeier_terms() const { return terms_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  /// Index without range or physicality checks; callers use refractive_index().
  double evaluate(double wavelength_nm) const;

  friend bool operator==(const DispersionModel&, const DispersionModel&) = default;

 private:
  DispersionKind kind_ = DispersionKind::constant;
  double constant_ = 1.0;
  std::vector<SellmeierTerm> terms_;
  std::vector<std::pair<double, double>> table_;
  WavelengthRange range_{0.0, 1e12};
};

struct Material {
  std::string name;
  DispersionModel dispersion;

  friend bool operator==(const Material&, const Material&) = default;
};

/// n(λ) with range checking. Throws RangeError naming the material and its
/// bounds when λ is outside the valid range or the model yields n < 1.
double refractive_index(const Material& material, double wavelength_nm);

/// The n = 1 medium used for omitted ambients.
Material vacuum();

/// Name-keyed set of materials; names are unique.
class MaterialRegistry {
 public:
  void add(Material material);
  bool contains(const std::string& name) const { return by_name_.count(name) != 0; }
  const Material& at(const std::string& name) const;
  std::size_t size() const { return by_name_.size(); }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Material> by_name_;
};

/// Parses the materials document (top-level JSON array). `source` is used
/// only in error messages.
MaterialRegistry parse_materials(const nlohmann::json& doc, const std::string& source = "<materials>");
MaterialRegistry load_materials(const std::filesystem::path& path);

nlohmann::json to_json(const Material& material);

}  // namespace pbg
