#pragma once

#include "pbg/units.hpp"

namespace pbg {

enum class PumpKind { cw, gaussian };

/// Classical pump incident from the left ambient.
///
/// Gaussian time profile ξ exp(−(1 + i a) t²/τ²) exp(−i ω0 t), linearly
/// polarized at angle φ from the TE axis. The cw pump is a spectral line
/// ξ δ(ω − ω0) and is never sampled; cw quantities go through the dedicated
/// cw code paths.
struct PumpSpec {
  PumpKind kind = PumpKind::cw;
  double amplitude = 1.0;      // ξ_p, arbitrary field units
  double duration_fs = 0.0;    // τ_p
  double chirp = 0.0;          // a_p
  double carrier_omega = 0.0;  // ω_p⁰, rad/fs
  double theta = 0.0;          // incidence angle, rad
  double polarization = 0.0;   // φ_p from the TE axis, rad

  static PumpSpec cw(double wavelength_nm, double amplitude = 1.0);
  static PumpSpec gaussian(double wavelength_nm, double duration_fs, double chirp = 0.0, double amplitude = 1.0);

  double carrier_wavelength() const { return omega_to_wavelength(carrier_omega); }
  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// ξ τ/√(2(1+ia)) exp(−τ²(ω−ω0)²/(4(1+ia))). Throws ConfigError for cw pumps.
cplx pump_spectrum(const PumpSpec& spec, double omega);

/// Complex envelope ξ exp(−(1+ia) t²/τ²) at the input facet (carrier removed).
cplx pump_envelope(const PumpSpec& spec, double t_fs);

struct PolarizationSplit {
  double te = 1.0;
  double tm = 0.0;
};

/// (cos φ_p, sin φ_p)
PolarizationSplit pump_polarization_split(const PumpSpec& spec);

}  // namespace pbg
