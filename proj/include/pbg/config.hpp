#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pbg/materials.hpp"
#include "pbg/observables.hpp"
#include "pbg/pump.hpp"
#include "pbg/structure.hpp"
#include "pbg/transfer.hpp"

namespace pbg {

/// Either a single value or {start, stop, steps}; steps = 0 is an empty sweep.
struct Sweep {
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 1;

  static Sweep single(double v) { return {v, v, 1}; }
  std::vector<double> values() const;
};

/// Window in which the pump carrier is tuned to the first long-wavelength
/// transmission maximum next to the deepest gap.
struct ResonanceSearch {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
  double step_nm = 0.01;
};

struct GridConfig {
  double signal_lo = 0.7;  // fractions of ω_p⁰/2
  double signal_hi = 1.3;
  std::size_t points = 512;
  std::size_t idler_points = 0;  // 0: same as points
  Sweep tau_fs{-1500.0, 1500.0, 1501};
  Sweep omega_norm{0.8, 2.2, 1401};
  bool omega_norm_double = true;  // ω_norm = 2ω/ω_p⁰ (else ω/ω_p⁰)
  std::size_t padding = 2;
  double time_window_fs = 1000.0;
};

struct RunConfig {
  std::filesystem::path source;
  std::filesystem::path materials_path;
  std::filesystem::path stack_path;
  MaterialRegistry materials;
  Stack stack;
  PumpSpec pump;
  std::optional<ResonanceSearch> resonance;
  Polarization transmission_polarization = Polarization::te;
  Sweep theta_s_deg = Sweep::single(0.0);
  double phi_s_deg = 0.0;
  double phi_i_deg = 0.0;
  GridConfig grid;
  double hom_window_fraction = 0.5;
  FluxMethod flux_method = FluxMethod::double_frequency;
  ReferenceWeight reference_weight = ReferenceWeight::as_written;
  double efficiency_omega_norm = 1.0;  // 2ω_s/ω_p⁰ at which η is reported
  std::filesystem::path output_dir = "out";
  std::uint64_t config_hash = 0;

  EmissionGeometry geometry(double theta_deg) const;
  UniformGrid signal_grid() const;
  UniformGrid idler_grid() const;
};

/// Relative paths inside the document resolve against `base_dir`.
/// A resonance block is resolved here, so `pump.carrier_omega` is final.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                           const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace pbg
