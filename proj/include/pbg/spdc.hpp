#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pbg/grid.hpp"
#include "pbg/pump.hpp"
#include "pbg/structure.hpp"
#include "pbg/transfer.hpp"

namespace pbg {

/// Exit channel of a pair: first letter signal, second idler; F leaves at
/// z_N (forward), B leaves at z_0 (backward).
enum class Channel { ff = 0, fb = 1, bf = 2, bb = 3 };

inline constexpr std::array<Channel, 4> kChannels{Channel::ff, Channel::fb, Channel::bf, Channel::bb};

std::string_view channel_name(Channel c);
inline constexpr std::size_t index(Channel c) { return static_cast<std::size_t>(c); }

using ChannelAmplitudes = std::array<cplx, 4>;

/// Signal emission angle (ambient) and analyzer angles measured from TE.
struct EmissionGeometry {
  double theta_s = 0.0;
  double phi_s = 0.0;
  double phi_i = 0.0;
};

/// Idler angle from transverse phase matching,
/// arcsin[(ω_p/ω_i) sin θ_p − (ω_s/ω_i) sin θ_s]; empty when the argument
/// leaves [−1, 1] (no propagating idler).
std::optional<double> idler_angle(double omega_p, double omega_s, double omega_i, double theta_p, double theta_s);

/// sin(x)/x with sinc(0) = 1, valid for complex arguments.
cplx sinc(cplx x);

/// Joint spectral amplitude on a uniform (ω_s, ω_i) grid, one sheet per
/// exit channel, stored row-major with the signal index slowest.
struct JsaGrid {
  UniformGrid signal;
  UniformGrid idler;
  std::array<std::vector<cplx>, 4> sheets;
  PumpSpec pump;
  EmissionGeometry geometry;
  std::uint64_t stack_hash = 0;
  std::size_t singular_points = 0;   // zeroed because a structure matrix was singular
  std::size_t forbidden_points = 0;  // zeroed because no propagating exit exists

  cplx& at(Channel c, std::size_t is, std::size_t ii) { return sheets[index(c)][is * idler.size + ii]; }
  const cplx& at(Channel c, std::size_t is, std::size_t ii) const { return sheets[index(c)][is * idler.size + ii]; }
  const std::vector<cplx>& sheet(Channel c) const { return sheets[index(c)]; }
};

/// cw joint amplitude: coefficient of δ(ω_p⁰ − ω_s − ω_i), sampled on the
/// signal grid with ω_i = ω_p⁰ − ω_s. Squared moduli carry the per-second
/// normalization 1/(2π) when turned into spectra (see observables).
struct CwJsa {
  UniformGrid signal;
  std::array<std::vector<cplx>, 4> sheets;
  PumpSpec pump;
  EmissionGeometry geometry;
  std::uint64_t stack_hash = 0;
  std::size_t singular_points = 0;
  std::size_t forbidden_points = 0;

  double pump_omega() const { return pump.carrier_omega; }
  double idler_omega(std::size_t is) const { return pump.carrier_omega - signal[is]; }
  const std::vector<cplx>& sheet(Channel c) const { return sheets[index(c)]; }
};

/// Evaluates the first-order pair amplitude of a layered stack: every
/// nonlinear layer radiates, each (pump, signal, idler) direction triple is
/// phase-matched over the layer, and internal signal/idler modes are mapped
/// to exit channels through the conjugated exit decomposition.
class SpdcModel {
 public:
  SpdcModel(Stack stack, PumpSpec pump, EmissionGeometry geometry);

  const Stack& stack() const { return stack_; }
  const PumpSpec& pump() const { return pump_; }
  const EmissionGeometry& geometry() const { return geometry_; }

  /// Pre-computed pump fields at ω_p for unit incident amplitude.
  struct PumpSide {
    AngleSet angles;
    std::array<FieldMap, 2> fields;  // per pump polarization (TE, TM)
  };
  /// Angles and exit decompositions of a signal or idler wave.
  struct EmittedSide {
    AngleSet angles;
    std::array<std::vector<TransferMatrix>, 2> exits;  // per polarization
    bool propagating = true;
  };

  PumpSide pump_side(double omega_p) const;
  EmittedSide signal_side(double omega_s) const;
  EmittedSide idler_side(double omega_p, double omega_s, double omega_i) const;

  /// Amplitudes for incident pump spectral amplitude `pump_amplitude`
  /// (already containing the spectrum value; split into TE/TM internally).
  ChannelAmplitudes amplitude(const PumpSide& pump, const EmittedSide& signal, const EmittedSide& idler,
                              cplx pump_amplitude) const;

  /// Pulsed pump: ω_p = ω_s + ω_i, weighted by the pump spectrum.
  ChannelAmplitudes pulsed_amplitude(double omega_s, double omega_i) const;
  /// cw pump: ω_i = ω_p⁰ − ω_s, weighted by ξ_p.
  ChannelAmplitudes cw_amplitude(double omega_s) const;

 private:
  Stack stack_;
  PumpSpec pump_;
  EmissionGeometry geometry_;
  PolarizationSplit pump_split_;
  std::array<double, 2> signal_weights_;
  std::array<double, 2> idler_weights_;
  std::vector<std::size_t> nonlinear_layers_;
  std::array<std::array<bool, 2>, 3> coupled_{};  // [pump, signal, idler][TE, TM]
};

/// ω_p⁰/2 · [0.7, 1.3] with `points` samples.
UniformGrid default_signal_grid(const PumpSpec& pump, std::size_t points = 512);

JsaGrid jsa(const Stack& stack, const PumpSpec& pump, const EmissionGeometry& geometry, const UniformGrid& signal,
            const UniformGrid& idler, std::size_t workers = 0);

CwJsa jsa_cw(const Stack& stack, const PumpSpec& pump, const EmissionGeometry& geometry, const UniformGrid& signal,
             std::size_t workers = 0);

/// Largest |φ| among points whose pump detuning |ω_s + ω_i − ω_p⁰| is within
/// 10% of the largest detuning on the grid, relative to the overall peak.
/// Small values mean the grid contains the pump bandwidth.
double pump_band_edge_ratio(const JsaGrid& grid);

}  // namespace pbg
