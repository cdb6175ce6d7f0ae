#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "pbg/grid.hpp"
#include "pbg/spdc.hpp"

namespace pbg {

/// Scale constants. Their only role is an overall factor on absolute
/// quantities; every ratio (η, R_n, normalized curves) is independent of them.
struct PhysicalConstants {
  double hbar = 1.0;
  double epsilon0 = 1.0;
  double c = kSpeedOfLight;
  double beam_area = 1.0;

  void validate() const;
  /// Factor applied to |φ|² in energy spectra: 1/(ε₀ 𝓑).
  double spectral_scale() const { return 1.0 / (epsilon0 * beam_area); }
};

/// cw amplitudes are coefficients of a delta function; squared moduli are
/// reported per unit time, which contributes this factor.
inline constexpr double kCwRateFactor = 1.0 / (2.0 * kPi);

using ChannelValues = std::array<double, 4>;

enum class OffGrid { nearest, strict };

struct PhotonNumber {
  double value = 0.0;
  bool snapped = false;  // the query was moved to the nearest node
};

/// |φ^{mn}(ω_s, ω_i)|² Δω_s Δω_i at a grid node.
PhotonNumber joint_photon_number(const JsaGrid& jsa, Channel c, double omega_s, double omega_i, double d_omega_s,
                                 double d_omega_i, OffGrid policy = OffGrid::nearest);

/// Δω_s ∫dω_i |φ^{mn}(ω_s, ω_i)|² at signal node `is`.
double marginal_signal_number(const JsaGrid& jsa, Channel c, std::size_t is, double d_omega_s);

/// ∫∫ |φ^{mn}|² per channel (composite trapezoid). Summing joint_photon_number
/// with trapezoid_weights as the cell widths reproduces it exactly.
ChannelValues total_pairs(const JsaGrid& jsa);

struct CurveStats {
  double peak = 0.0;
  double peak_omega = 0.0;  // rad/fs
  double fwhm_omega = 0.0;  // rad/fs
  double fwhm_nm = 0.0;     // same crossings expressed in wavelength
};

/// Energy spectra S_s^{mn}(ω_s) = ħ ω_s ∫dω_i |φ^{mn}|² and the idler
/// analogues, plus exit-port sums S_sF = FF+FB, S_sB = BF+BB,
/// S_iF = FF+BF, S_iB = FB+BB.
struct SpectrumResult {
  std::vector<double> signal_omega;
  std::vector<double> idler_omega;
  std::array<std::vector<double>, 4> signal;
  std::array<std::vector<double>, 4> idler;
  std::vector<double> signal_forward, signal_backward;
  std::vector<double> idler_forward, idler_backward;
  std::array<CurveStats, 4> signal_stats;
  CurveStats signal_forward_stats, signal_backward_stats;
};

SpectrumResult energy_spectrum(const JsaGrid& jsa, const PhysicalConstants& k = {});
/// cw spectra carry kCwRateFactor; idler entries are indexed like the
/// signal grid (ω_i = ω_p⁰ − ω_s, so they run downward).
SpectrumResult energy_spectrum(const CwJsa& jsa, const PhysicalConstants& k = {});

/// Two-photon amplitude (1/2π)∫∫ √(ω_sω_i/ω_s⁰ω_i⁰) φ e^{−iω_sτ_s − iω_iτ_i}
/// on the time grid of a zero-padded FFT. ω⁰ are the grid centers.
struct TimeDomainTpa {
  UniformGrid tau_s;
  UniformGrid tau_i;
  std::vector<cplx> amplitude;  // row-major, τ_s slowest
  bool normalized = false;

  const cplx& at(std::size_t ks, std::size_t ki) const { return amplitude[ks * tau_i.size + ki]; }
};

struct TpaOptions {
  std::size_t padding = 2;  // FFT length = padding × grid size, at least 2
  bool normalize = true;    // scale to ∫∫|𝒜|² dτ_s dτ_i = 1
};

TimeDomainTpa time_domain_tpa(const JsaGrid& jsa, Channel c, const TpaOptions& opt = {});

/// cw two-photon amplitude depends on τ_s − τ_i only; returned as a 1D
/// curve over the relative delay (stored in tau_s, tau_i has size 1).
TimeDomainTpa time_domain_tpa(const CwJsa& jsa, Channel c, const TpaOptions& opt = {});

/// Direct double-sum evaluation of the same transform (no padding, no
/// normalization) at explicit times. Slow; meant for cross-checks.
cplx tpa_direct(const JsaGrid& jsa, Channel c, double tau_s, double tau_i);

enum class FluxMethod {
  double_frequency,  // (ħ/8π) ∫dω_i |∫dω_s √ω_s φ e^{−iω_sτ}|²
  narrow_idler,      // (ħω_s⁰/4) ∫dτ_i |φ(τ_s, τ_i)|², evaluated through Parseval in ω_i
};

struct FluxResult {
  UniformGrid tau;
  std::array<std::vector<double>, 4> flux;
  struct Stats {
    double peak = 0.0;
    double delay = 0.0;  // τ at the peak, fs
    double fwhm = 0.0;   // fs
  };
  std::array<Stats, 4> stats;
};

FluxResult photon_flux(const JsaGrid& jsa, const UniformGrid& tau, const PhysicalConstants& k = {},
                       FluxMethod method = FluxMethod::double_frequency, std::size_t workers = 0);

struct DipStatistics {
  double center = 0.0;      // τ_l^c, fs
  double width = 0.0;       // Δτ_l, fs
  double rho_peak = 0.0;    // 1 − R_n at the center
  double visibility = 0.0;  // ρ/(2 − ρ)
};

struct HomScan {
  std::vector<double> tau;
  std::vector<double> rn;
  DipStatistics dip;
};

/// R_n(τ_l) = 1 − ρ(τ_l) with ρ from the frequency-domain overlap of φ(ω_s, ω_i)
/// and φ*(ω_i, ω_s) weighted by ω_sω_i. Needs identical signal and idler grids.
HomScan hom_scan(const JsaGrid& jsa, Channel c, const std::vector<double>& tau, double window_fraction = 0.5);
/// cw version; the signal grid must be symmetric about ω_p⁰/2.
HomScan hom_scan(const CwJsa& jsa, Channel c, const std::vector<double>& tau, double window_fraction = 0.5);

/// The extremum of ρ is searched in the central `window_fraction` of the τ
/// range; the width spans the outermost crossings of the half-depth level
/// 1 − ρ_peak/2 (linear interpolation).
DipStatistics dip_statistics(const std::vector<double>& tau, const std::vector<double>& rn,
                             double window_fraction = 0.5);

/// Outermost crossings of half the global maximum (linear interpolation).
/// Multi-peak curves therefore report their full active width.
std::pair<double, double> half_max_bounds(const std::vector<double>& x, const std::vector<double>& y);
double fwhm(const std::vector<double>& x, const std::vector<double>& y);

/// How the reference amplitude weights frequencies: literally √ω_s √(ω_p − ω_i),
/// or √ω_s √ω_i. The two agree at degeneracy.
enum class ReferenceWeight { as_written, signal_idler };

/// Ideal reference: unit indices, full phase matching, maximal coupling;
/// amplitude (1/(2√(2π)c)) √ω_s √(·) |E_p(ω_p)| Σ_l max|d^{(l)}| L_l, stored in the FF sheet.
JsaGrid reference_jsa(const Stack& stack, const PumpSpec& pump, const UniformGrid& signal, const UniformGrid& idler,
                      ReferenceWeight weight = ReferenceWeight::as_written);
CwJsa reference_jsa_cw(const Stack& stack, const PumpSpec& pump, const UniformGrid& signal,
                       ReferenceWeight weight = ReferenceWeight::as_written);

struct EfficiencyReport {
  ChannelValues eta{};
  double total = 0.0;
};

/// η^{mn}(ω_s) = S_s^{mn}/S_s^{ref} at signal node `is`. Throws NumericalError
/// when the reference spectrum vanishes there.
EfficiencyReport relative_efficiency(const SpectrumResult& spectrum, const SpectrumResult& reference, std::size_t is);

/// η at one signal frequency. cw: direct ratio of squared amplitudes.
/// Gaussian: both spectra integrate over an idler grid spanning ±`bandwidths`
/// pump bandwidths around ω_p⁰ − ω_s with `idler_points` samples.
EfficiencyReport efficiency_at(const Stack& stack, const PumpSpec& pump, const EmissionGeometry& geometry,
                               double omega_s, ReferenceWeight weight = ReferenceWeight::as_written,
                               std::size_t idler_points = 801, double bandwidths = 8.0);

}  // namespace pbg
