#include "pbg/structure.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "pbg/error.hpp"
#include "pbg/hash.hpp"

namespace pbg {

using nlohmann::json;

Chi2Tensor Chi2Tensor::te_only(double d_eff) {
  Chi2Tensor t;
  t.at(0, 0, 0) = d_eff;
  return t;
}

double Chi2Tensor::max_abs() const {
  double m = 0.0;
  for (double v : d) m = std::max(m, std::abs(v));
  return m;
}

bool Chi2Tensor::is_zero() const {
  for (double v : d)
    if (v != 0.0) return false;
  return true;
}

std::complex<double> Chi2Tensor::contract(const Vec3c& pump, const Vec3c& signal, const Vec3c& idler) const {
  std::complex<double> sum{0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    if (pump[a] == 0.0) continue;
    for (int b = 0; b < 3; ++b) {
      if (signal[b] == 0.0) continue;
      const std::complex<double> ps = pump[a] * signal[b];
      for (int c = 0; c < 3; ++c) {
        const double v = at(a, b, c);
        if (v != 0.0) sum += v * ps * idler[c];
      }
    }
  }
  return sum;
}

Chi2Tensor Chi2Tensor::scaled(double factor) const {
  Chi2Tensor t = *this;
  for (double& v : t.d) v *= factor;
  return t;
}

const Material& Stack::region_material(std::size_t r) const {
  if (r == 0) return ambient_left;
  if (r == layers.size() + 1) return ambient_right;
  return layers.at(r - 1).material;
}

double Stack::region_thickness(std::size_t r) const {
  if (r == 0 || r == layers.size() + 1) return 0.0;
  return layers.at(r - 1).thickness_nm;
}

void Stack::validate() const {
  if (layers.empty()) throw ConfigError("stack must contain at least one layer");
  if (!std::isfinite(z0_nm)) throw ConfigError("z0 must be finite");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    if (!(layer.thickness_nm > 0.0) || !std::isfinite(layer.thickness_nm))
      throw ConfigError("layer " + std::to_string(i + 1) + ": thickness must be positive and finite");
    for (double v : layer.chi2.d)
      if (!std::isfinite(v)) throw ConfigError("layer " + std::to_string(i + 1) + ": nonlinear tensor entries must be finite");
  }
}

std::vector<double> boundary_positions(const Stack& stack) {
  std::vector<double> z;
  z.reserve(stack.layers.size() + 1);
  z.push_back(stack.z0_nm);
  for (const auto& layer : stack.layers) z.push_back(z.back() + layer.thickness_nm);
  return z;
}

double total_thickness(const Stack& stack) {
  double sum = 0.0;
  for (const auto& layer : stack.layers) sum += layer.thickness_nm;
  return sum;
}

Stack build_periodic(const std::vector<Layer>& cell, std::size_t repetitions, bool terminate_with_first,
                     Material ambient_left, Material ambient_right) {
  if (cell.empty()) throw ConfigError("periodic cell must not be empty");
  if (repetitions < 1) throw ConfigError("periodic repetitions must be >= 1");
  Stack stack;
  stack.ambient_left = std::move(ambient_left);
  stack.ambient_right = std::move(ambient_right);
  stack.layers.reserve(cell.size() * repetitions + 1);
  for (std::size_t r = 0; r < repetitions; ++r) stack.layers.insert(stack.layers.end(), cell.begin(), cell.end());
  if (terminate_with_first) stack.layers.push_back(cell.front());
  stack.validate();
  return stack;
}

namespace {

Material ambient(const json& doc, const char* key, const MaterialRegistry& registry, const std::string& path) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return registry.contains("vacuum") ? registry.at("vacuum") : vacuum();
  const std::string name = detail::as_string(*it, path + "." + key);
  if (name == "vacuum" && !registry.contains("vacuum")) return vacuum();
  if (!registry.contains(name)) throw ConfigError(path + "." + key + ": unknown material '" + name + "'");
  return registry.at(name);
}

Chi2Tensor parse_tensor(const json& v, const std::string& path) {
  Chi2Tensor t;
  if (!v.is_array() || v.size() != 3) throw ConfigError(path + ": expected a 3x3x3 nested array");
  for (int a = 0; a < 3; ++a) {
    const auto& va = v[static_cast<std::size_t>(a)];
    if (!va.is_array() || va.size() != 3) throw ConfigError(path + "[" + std::to_string(a) + "]: expected 3x3");
    for (int b = 0; b < 3; ++b) {
      const auto& vb = va[static_cast<std::size_t>(b)];
      if (!vb.is_array() || vb.size() != 3)
        throw ConfigError(path + "[" + std::to_string(a) + "][" + std::to_string(b) + "]: expected 3 entries");
      for (int c = 0; c < 3; ++c)
        t.at(a, b, c) = detail::as_number(vb[static_cast<std::size_t>(c)],
                                          path + "[" + std::to_string(a) + "][" + std::to_string(b) + "][" +
                                              std::to_string(c) + "]");
    }
  }
  return t;
}

Layer parse_layer(const json& v, const MaterialRegistry& registry, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path + ": expected an object");
  Layer layer;
  const std::string name = detail::as_string(detail::require(v, "material", path), path + ".material");
  if (!registry.contains(name)) throw ConfigError(path + ".material: unknown material '" + name + "'");
  layer.material = registry.at(name);
  layer.thickness_nm = detail::as_number(detail::require(v, "thickness_nm", path), path + ".thickness_nm");
  if (!(layer.thickness_nm > 0.0)) throw ConfigError(path + ".thickness_nm: thickness must be positive");
  const bool has_tensor = v.contains("d_tensor_pm_per_V");
  const bool has_eff = v.contains("d_eff_TE_pm_per_V");
  if (has_tensor && has_eff)
    throw ConfigError(path + ": give either d_tensor_pm_per_V or d_eff_TE_pm_per_V, not both");
  if (has_tensor) layer.chi2 = parse_tensor(v["d_tensor_pm_per_V"], path + ".d_tensor_pm_per_V");
  if (has_eff) layer.chi2 = Chi2Tensor::te_only(detail::as_number(v["d_eff_TE_pm_per_V"], path + ".d_eff_TE_pm_per_V"));
  return layer;
}

std::vector<Layer> parse_layers(const json& arr, const MaterialRegistry& registry, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<Layer> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parse_layer(arr[i], registry, path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

Stack parse_stack(const json& doc, const MaterialRegistry& registry, const std::string& source) {
  const std::string root = "$";
  try {
    if (!doc.is_object()) throw ConfigError("$: expected an object");
    Stack stack;
    stack.ambient_left = ambient(doc, "ambient_left", registry, root);
    stack.ambient_right = ambient(doc, "ambient_right", registry, root);
    stack.z0_nm = detail::number_or(doc, "z0_nm", 0.0, root);
    if (doc.contains("layers")) stack.layers = parse_layers(doc["layers"], registry, "$.layers");
    if (doc.contains("periodic")) {
      const auto& p = doc["periodic"];
      const std::string ppath = "$.periodic";
      const auto cell = parse_layers(detail::require(p, "cell", ppath), registry, ppath + ".cell");
      if (cell.empty()) throw ConfigError(ppath + ".cell: periodic cell must not be empty");
      const std::size_t reps = detail::as_count(detail::require(p, "repetitions", ppath), ppath + ".repetitions");
      if (reps < 1) throw ConfigError(ppath + ".repetitions: must be >= 1");
      const bool terminate =
          p.contains("terminate_with_first") && detail::as_bool(p["terminate_with_first"], ppath + ".terminate_with_first");
      const Stack expanded = build_periodic(cell, reps, terminate);
      stack.layers.insert(stack.layers.end(), expanded.layers.begin(), expanded.layers.end());
    }
    if (stack.layers.empty()) throw ConfigError("$.layers: stack must contain at least one layer");
    stack.validate();
    return stack;
  } catch (const RangeError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

Stack load_stack(const std::filesystem::path& path, const MaterialRegistry& registry) {
  return parse_stack(detail::read_json_file(path), registry, path.string());
}

json to_json(const Stack& stack) {
  json layers = json::array();
  for (const auto& layer : stack.layers) {
    json tensor = json::array();
    for (int a = 0; a < 3; ++a) {
      json ja = json::array();
      for (int b = 0; b < 3; ++b) {
        json jb = json::array();
        for (int c = 0; c < 3; ++c) jb.push_back(layer.chi2.at(a, b, c));
        ja.push_back(jb);
      }
      tensor.push_back(ja);
    }
    layers.push_back({{"material", layer.material.name},
                      {"thickness_nm", layer.thickness_nm},
                      {"d_tensor_pm_per_V", tensor}});
  }
  return json{{"ambient_left", stack.ambient_left.name},
              {"ambient_right", stack.ambient_right.name},
              {"z0_nm", stack.z0_nm},
              {"layers", layers}};
}

std::uint64_t stack_hash(const Stack& stack) {
  json j = to_json(stack);
  json mats = json::object();
  mats[stack.ambient_left.name] = to_json(stack.ambient_left);
  mats[stack.ambient_right.name] = to_json(stack.ambient_right);
  for (const auto& layer : stack.layers) mats[layer.material.name] = to_json(layer.material);
  j["materials"] = mats;
  return fnv1a64(j.dump());
}

}  // namespace pbg
