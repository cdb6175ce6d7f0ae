#include "pbg/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "pbg/error.hpp"

namespace pbg {

using nlohmann::json;

DispersionModel DispersionModel::constant(double index, WavelengthRange range) {
  if (!std::isfinite(index) || index < 1.0) throw ConfigError("constant index must be finite and >= 1");
  DispersionModel m;
  m.kind_ = DispersionKind::constant;
  m.constant_ = index;
  m.range_ = range;
  return m;
}

DispersionModel DispersionModel::sellmeier(double offset, std::vector<SellmeierTerm> terms,
                                           WavelengthRange range) {
  if (!std::isfinite(offset)) throw ConfigError("sellmeier offset must be finite");
  for (const auto& t : terms) {
    if (!std::isfinite(t.b) || !std::isfinite(t.c_um2))
      throw ConfigError("sellmeier coefficients must be finite");
  }
  if (!(range.hi > range.lo) || range.lo <= 0.0) throw ConfigError("sellmeier valid range must be positive and non-empty");
  DispersionModel m;
  m.kind_ = DispersionKind::sellmeier;
  m.constant_ = offset;
  m.terms_ = std::move(terms);
  m.range_ = range;
  return m;
}

DispersionModel DispersionModel::tabulated(std::vector<std::pair<double, double>> table) {
  if (table.empty()) throw ConfigError("tabulated dispersion needs at least one sample");
  const WavelengthRange range{table.front().first, table.back().first};
  return tabulated(std::move(table), range);
}

DispersionModel DispersionModel::tabulated(std::vector<std::pair<double, double>> table,
                                           WavelengthRange range) {
  if (table.size() < 2) throw ConfigError("tabulated dispersion needs at least two samples");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto [wl, n] = table[i];
    if (!std::isfinite(wl) || !std::isfinite(n)) throw ConfigError("tabulated samples must be finite");
    if (n < 1.0) throw ConfigError("tabulated index must be >= 1");
    if (i > 0 && !(wl > table[i - 1].first))
      throw ConfigError("tabulated wavelengths must be strictly increasing");
  }
  if (range.lo < table.front().first || range.hi > table.back().first || !(range.hi > range.lo))
    throw ConfigError("tabulated valid range must lie inside the table");
  DispersionModel m;
  m.kind_ = DispersionKind::tabulated;
  m.table_ = std::move(table);
  m.range_ = range;
  return m;
}

double DispersionModel::evaluate(double wavelength_nm) const {
  switch (kind_) {
    case DispersionKind::constant:
      return constant_;
    case DispersionKind::sellmeier: {
      const double l2 = (wavelength_nm * 1e-3) * (wavelength_nm * 1e-3);
      double n2 = constant_;
      for (const auto& t : terms_) n2 += t.b * l2 / (l2 - t.c_um2);
      return n2 > 0.0 ? std::sqrt(n2) : 0.0;
    }
    case DispersionKind::tabulated: {
      auto hi = std::lower_bound(table_.begin(), table_.end(), wavelength_nm,
                                 [](const auto& s, double x) { return s.first < x; });
      if (hi == table_.end()) return table_.back().second;
      if (hi->first == wavelength_nm || hi == table_.begin()) return hi->second;
      const auto lo = std::prev(hi);
      const double t = (wavelength_nm - lo->first) / (hi->first - lo->first);
      return lo->second + t * (hi->second - lo->second);
    }
  }
  return constant_;
}

double refractive_index(const Material& material, double wavelength_nm) {
  const auto& range = material.dispersion.valid_range();
  if (!range.contains(wavelength_nm)) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_nm << " nm outside valid range [" << range.lo << ", "
        << range.hi << "] nm of material '" << material.name << "'";
    throw RangeError(msg.str());
  }
  const double n = material.dispersion.evaluate(wavelength_nm);
  if (!(n >= 1.0)) {
    std::ostringstream msg;
    msg << "material '" << material.name << "' yields unphysical index " << n << " at "
        << wavelength_nm << " nm";
    throw RangeError(msg.str());
  }
  return n;
}

Material vacuum() { return {"vacuum", DispersionModel::constant(1.0)}; }

void MaterialRegistry::add(Material material) {
  if (material.name.empty()) throw ConfigError("material name must not be empty");
  if (contains(material.name)) throw ConfigError("duplicate material name '" + material.name + "'");
  auto name = material.name;
  by_name_.emplace(std::move(name), std::move(material));
}

const Material& MaterialRegistry::at(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ConfigError("unknown material '" + name + "'");
  return it->second;
}

std::vector<std::string> MaterialRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : by_name_) out.push_back(name);
  return out;
}

namespace {

WavelengthRange parse_range(const json& obj, const std::string& path) {
  const auto& r = detail::require(obj, "valid_range_nm", path);
  const std::string rpath = path + ".valid_range_nm";
  if (!r.is_array() || r.size() != 2) throw ConfigError(rpath + ": expected [lo, hi]");
  WavelengthRange range{detail::as_number(r[0], rpath + "[0]"), detail::as_number(r[1], rpath + "[1]")};
  if (!(range.hi > range.lo)) throw ConfigError(rpath + ": hi must exceed lo");
  return range;
}

Material parse_material(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  Material m;
  m.name = detail::as_string(detail::require(obj, "name", path), path + ".name");
  const std::string model = detail::as_string(detail::require(obj, "model", path), path + ".model");
  try {
    if (model == "constant") {
      const double n = detail::as_number(detail::require(obj, "index", path), path + ".index");
      m.dispersion = obj.contains("valid_range_nm") ? DispersionModel::constant(n, parse_range(obj, path))
                                                    : DispersionModel::constant(n);
    } else if (model == "sellmeier") {
      const double offset = obj.contains("offset") ? detail::as_number(obj["offset"], path + ".offset") : 1.0;
      const auto& terms_json = detail::require(obj, "terms", path);
      if (!terms_json.is_array()) throw ConfigError(path + ".terms: expected an array");
      std::vector<SellmeierTerm> terms;
      for (std::size_t k = 0; k < terms_json.size(); ++k) {
        const std::string tpath = path + ".terms[" + std::to_string(k) + "]";
        const auto& t = terms_json[k];
        if (!t.is_object()) throw ConfigError(tpath + ": expected {\"B\": .., \"C_um2\": ..}");
        terms.push_back({detail::as_number(detail::require(t, "B", tpath), tpath + ".B"),
                         detail::as_number(detail::require(t, "C_um2", tpath), tpath + ".C_um2")});
      }
      m.dispersion = DispersionModel::sellmeier(offset, std::move(terms), parse_range(obj, path));
    } else if (model == "tabulated") {
      const auto& tab = detail::require(obj, "table", path);
      if (!tab.is_array()) throw ConfigError(path + ".table: expected an array of [wavelength_nm, index]");
      std::vector<std::pair<double, double>> table;
      for (std::size_t k = 0; k < tab.size(); ++k) {
        const std::string tpath = path + ".table[" + std::to_string(k) + "]";
        if (!tab[k].is_array() || tab[k].size() != 2) throw ConfigError(tpath + ": expected [wavelength_nm, index]");
        table.emplace_back(detail::as_number(tab[k][0], tpath + "[0]"), detail::as_number(tab[k][1], tpath + "[1]"));
      }
      m.dispersion = obj.contains("valid_range_nm")
                         ? DispersionModel::tabulated(std::move(table), parse_range(obj, path))
                         : DispersionModel::tabulated(std::move(table));
    } else {
      throw ConfigError(path + ".model: unknown model '" + model + "' (constant|sellmeier|tabulated)");
    }
  } catch (const RangeError&) {
    throw;
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw ConfigError(path + ": " + what);
  }
  return m;
}

}  // namespace

MaterialRegistry parse_materials(const json& doc, const std::string& source) {
  if (!doc.is_array()) throw ConfigError(source + ": $: expected a top-level array of materials");
  MaterialRegistry registry;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "$[" + std::to_string(i) + "]";
    Material m;
    try {
      m = parse_material(doc[i], path);
    } catch (const RangeError&) {
      throw;
    } catch (const ConfigError& e) {
      throw ConfigError(source + ": " + e.what());
    }
    if (registry.contains(m.name))
      throw ConfigError(source + ": " + path + ".name: duplicate material name '" + m.name + "'");
    registry.add(std::move(m));
  }
  return registry;
}

MaterialRegistry load_materials(const std::filesystem::path& path) {
  const json doc = detail::read_json_file(path);
  try {
    return parse_materials(doc, path.string());
  } catch (const RangeError&) {
    throw;
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw ConfigError(path.string() + ": " + what);
  }
}

json to_json(const Material& material) {
  const auto& d = material.dispersion;
  json j{{"name", material.name}};
  switch (d.kind()) {
    case DispersionKind::constant:
      j["model"] = "constant";
      j["index"] = d.constant_index();
      if (d.valid_range() != WavelengthRange{0.0, 1e12})
        j["valid_range_nm"] = {d.valid_range().lo, d.valid_range().hi};
      break;
    case DispersionKind::sellmeier: {
      j["model"] = "sellmeier";
      j["offset"] = d.sellmeier_offset();
      json terms = json::array();
      for (const auto& t : d.sellmeier_terms()) terms.push_back({{"B", t.b}, {"C_um2", t.c_um2}});
      j["terms"] = terms;
      j["valid_range_nm"] = {d.valid_range().lo, d.valid_range().hi};
      break;
    }
    case DispersionKind::tabulated: {
      j["model"] = "tabulated";
      json tab = json::array();
      for (const auto& [wl, n] : d.table()) tab.push_back({wl, n});
      j["table"] = tab;
      j["valid_range_nm"] = {d.valid_range().lo, d.valid_range().hi};
      break;
    }
  }
  return j;
}

}  // namespace pbg
