#include "pbg/config.hpp"

#include <cmath>

#include "json_util.hpp"
#include "pbg/hash.hpp"

namespace pbg {

using nlohmann::json;

std::vector<double> Sweep::values() const {
  std::vector<double> out;
  if (steps == 0) return out;
  if (steps == 1) return {start};
  out.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k)
    out.push_back(start + (stop - start) * static_cast<double>(k) / static_cast<double>(steps - 1));
  return out;
}

EmissionGeometry RunConfig::geometry(double theta_deg) const {
  return {deg_to_rad(theta_deg), deg_to_rad(phi_s_deg), deg_to_rad(phi_i_deg)};
}

UniformGrid RunConfig::signal_grid() const {
  const double half = 0.5 * pump.carrier_omega;
  return UniformGrid::span(grid.signal_lo * half, grid.signal_hi * half, grid.points);
}

UniformGrid RunConfig::idler_grid() const {
  const double half = 0.5 * pump.carrier_omega;
  return UniformGrid::span(grid.signal_lo * half, grid.signal_hi * half,
                           grid.idler_points ? grid.idler_points : grid.points);
}

namespace {

Sweep parse_sweep(const json& v, const std::string& path) {
  if (v.is_number()) return Sweep::single(v.get<double>());
  if (!v.is_object()) throw ConfigError(path + ": expected a number or {start, stop, steps}");
  Sweep s;
  s.start = detail::as_number(detail::require(v, "start", path), path + ".start");
  s.stop = detail::as_number(detail::require(v, "stop", path), path + ".stop");
  s.steps = detail::as_count(detail::require(v, "steps", path), path + ".steps");
  if (!std::isfinite(s.start) || !std::isfinite(s.stop)) throw ConfigError(path + ": bounds must be finite");
  return s;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Polarization parse_polarization(const json& v, const std::string& path) {
  const std::string s = lower(detail::as_string(v, path));
  if (s == "te") return Polarization::te;
  if (s == "tm") return Polarization::tm;
  throw ConfigError(path + ": expected \"TE\" or \"TM\"");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

void parse_pump(const json& p, RunConfig& cfg) {
  const std::string path = "$.pump";
  if (!p.is_object()) throw ConfigError(path + ": expected an object");
  const std::string kind = lower(detail::as_string(detail::require(p, "kind", path), path + ".kind"));
  PumpSpec pump;
  if (kind == "cw") {
    pump.kind = PumpKind::cw;
  } else if (kind == "gaussian" || kind == "pulsed") {
    pump.kind = PumpKind::gaussian;
    pump.duration_fs = detail::as_number(detail::require(p, "tau_fs", path), path + ".tau_fs");
    pump.chirp = detail::number_or(p, "chirp", 0.0, path);
  } else {
    throw ConfigError(path + ".kind: expected \"cw\" or \"gaussian\"");
  }
  pump.amplitude = detail::number_or(p, "amplitude", 1.0, path);
  pump.theta = deg_to_rad(detail::number_or(p, "theta_p_deg", 0.0, path));
  pump.polarization = deg_to_rad(detail::number_or(p, "phi_p_deg", 0.0, path));

  const bool has_wl = p.contains("wavelength_nm");
  const bool has_res = p.contains("resonance");
  if (has_wl == has_res) throw ConfigError(path + ": give exactly one of wavelength_nm or resonance");
  double wavelength = 0.0;
  if (has_wl) {
    wavelength = detail::as_number(p["wavelength_nm"], path + ".wavelength_nm");
    if (!(wavelength > 0.0)) throw ConfigError(path + ".wavelength_nm: must be positive");
  } else {
    const auto& r = p["resonance"];
    const std::string rpath = path + ".resonance";
    ResonanceSearch search;
    search.lo_nm = detail::as_number(detail::require(r, "lo_nm", rpath), rpath + ".lo_nm");
    search.hi_nm = detail::as_number(detail::require(r, "hi_nm", rpath), rpath + ".hi_nm");
    search.step_nm = detail::number_or(r, "step_nm", 0.01, rpath);
    const Polarization pol = r.contains("polarization") ? parse_polarization(r["polarization"], rpath + ".polarization")
                                                        : Polarization::te;
    cfg.resonance = search;
    wavelength = find_band_edge_resonance(cfg.stack, pol, pump.theta, search.lo_nm, search.hi_nm, search.step_nm);
  }
  pump.carrier_omega = wavelength_to_omega(wavelength);
  try {
    pump.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  cfg.pump = pump;
}

void parse_grid(const json& g, GridConfig& grid) {
  const std::string path = "$.grid";
  if (!g.is_object()) throw ConfigError(path + ": expected an object");
  if (g.contains("signal_span")) {
    const auto& s = g["signal_span"];
    if (!s.is_array() || s.size() != 2) throw ConfigError(path + ".signal_span: expected [lo, hi]");
    grid.signal_lo = detail::as_number(s[0], path + ".signal_span[0]");
    grid.signal_hi = detail::as_number(s[1], path + ".signal_span[1]");
    if (!(grid.signal_lo > 0.0 && grid.signal_hi > grid.signal_lo))
      throw ConfigError(path + ".signal_span: need 0 < lo < hi");
  }
  if (g.contains("points")) grid.points = detail::as_count(g["points"], path + ".points");
  if (g.contains("idler_points")) grid.idler_points = detail::as_count(g["idler_points"], path + ".idler_points");
  if (grid.points < 1) throw ConfigError(path + ".points: must be >= 1");
  if (g.contains("tau_fs")) grid.tau_fs = parse_sweep(g["tau_fs"], path + ".tau_fs");
  if (g.contains("omega_norm")) grid.omega_norm = parse_sweep(g["omega_norm"], path + ".omega_norm");
  if (g.contains("omega_norm_convention")) {
    const std::string c = detail::as_string(g["omega_norm_convention"], path + ".omega_norm_convention");
    if (c == "2w/wp") grid.omega_norm_double = true;
    else if (c == "w/wp") grid.omega_norm_double = false;
    else throw ConfigError(path + ".omega_norm_convention: expected \"2w/wp\" or \"w/wp\"");
  }
  if (g.contains("padding")) grid.padding = detail::as_count(g["padding"], path + ".padding");
  if (grid.padding < 2) throw ConfigError(path + ".padding: must be >= 2");
  grid.time_window_fs = detail::number_or(g, "time_window_fs", grid.time_window_fs, path);
  if (!(grid.time_window_fs > 0.0)) throw ConfigError(path + ".time_window_fs: must be positive");
}

}  // namespace

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir, const std::string& source) {
  try {
    if (!doc.is_object()) throw ConfigError("$: expected an object");
    RunConfig cfg;
    cfg.source = source;
    cfg.config_hash = fnv1a64(doc.dump());
    cfg.materials_path = resolve(base_dir, detail::as_string(detail::require(doc, "materials", "$"), "$.materials"));
    cfg.stack_path = resolve(base_dir, detail::as_string(detail::require(doc, "stack", "$"), "$.stack"));
    cfg.materials = load_materials(cfg.materials_path);
    cfg.stack = load_stack(cfg.stack_path, cfg.materials);
    parse_pump(detail::require(doc, "pump", "$"), cfg);

    if (doc.contains("geometry")) {
      const auto& g = doc["geometry"];
      const std::string path = "$.geometry";
      if (!g.is_object()) throw ConfigError(path + ": expected an object");
      if (g.contains("theta_s_deg")) cfg.theta_s_deg = parse_sweep(g["theta_s_deg"], path + ".theta_s_deg");
      cfg.phi_s_deg = detail::number_or(g, "phi_s_deg", 0.0, path);
      cfg.phi_i_deg = detail::number_or(g, "phi_i_deg", 0.0, path);
      for (double t : cfg.theta_s_deg.values())
        if (!(std::abs(t) < 90.0)) throw ConfigError(path + ".theta_s_deg: angles must satisfy |theta| < 90");
    }
    if (doc.contains("grid")) parse_grid(doc["grid"], cfg.grid);
    if (doc.contains("transmission")) {
      const auto& t = doc["transmission"];
      if (t.contains("polarization"))
        cfg.transmission_polarization = parse_polarization(t["polarization"], "$.transmission.polarization");
    }
    if (doc.contains("hom")) {
      cfg.hom_window_fraction = detail::number_or(doc["hom"], "window_fraction", 0.5, "$.hom");
      if (!(cfg.hom_window_fraction > 0.0 && cfg.hom_window_fraction <= 1.0))
        throw ConfigError("$.hom.window_fraction: must be in (0, 1]");
    }
    if (doc.contains("flux") && doc["flux"].contains("method")) {
      const std::string m = detail::as_string(doc["flux"]["method"], "$.flux.method");
      if (m == "double_frequency") cfg.flux_method = FluxMethod::double_frequency;
      else if (m == "narrow_idler") cfg.flux_method = FluxMethod::narrow_idler;
      else throw ConfigError("$.flux.method: expected \"double_frequency\" or \"narrow_idler\"");
    }
    if (doc.contains("efficiency")) {
      const auto& e = doc["efficiency"];
      const std::string path = "$.efficiency";
      if (e.contains("reference_weight")) {
        const std::string w = detail::as_string(e["reference_weight"], path + ".reference_weight");
        if (w == "as_written") cfg.reference_weight = ReferenceWeight::as_written;
        else if (w == "signal_idler") cfg.reference_weight = ReferenceWeight::signal_idler;
        else throw ConfigError(path + ".reference_weight: expected \"as_written\" or \"signal_idler\"");
      }
      cfg.efficiency_omega_norm = detail::number_or(e, "omega_norm", 1.0, path);
      if (!(cfg.efficiency_omega_norm > 0.0 && cfg.efficiency_omega_norm < 2.0))
        throw ConfigError(path + ".omega_norm: 2w_s/w_p must lie in (0, 2)");
    }
    if (doc.contains("output_dir"))
      cfg.output_dir = resolve(base_dir, detail::as_string(doc["output_dir"], "$.output_dir"));
    else
      cfg.output_dir = (base_dir / "out").lexically_normal();
    return cfg;
  } catch (const RangeError&) {
    throw;
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(source, 0) == 0) throw;
    throw ConfigError(source + ": " + what);
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const json doc = detail::read_json_file(path);
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_run_config(doc, base, path.string());
}

}  // namespace pbg
