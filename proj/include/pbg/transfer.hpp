#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "pbg/structure.hpp"
#include "pbg/units.hpp"

namespace pbg {

enum class Polarization { te, tm };

/// 2×2 complex matrix acting on (forward, backward) amplitude pairs.
struct TransferMatrix {
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  static TransferMatrix identity() { return {}; }
  static TransferMatrix diagonal(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

  cplx det() const { return m11 * m22 - m12 * m21; }
  TransferMatrix inverse() const;
  TransferMatrix conj() const { return {std::conj(m11), std::conj(m12), std::conj(m21), std::conj(m22)}; }

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
};

/// Forward/backward amplitude pair. Inside layer l it refers to the layer's
/// left edge z_{l-1}; in the ambients to the facet (z_0 on the left, z_N on
/// the right).
struct FieldAmplitudes {
  cplx forward{0.0};
  cplx backward{0.0};
};

inline FieldAmplitudes operator*(const TransferMatrix& m, const FieldAmplitudes& a) {
  return {m.m11 * a.forward + m.m12 * a.backward, m.m21 * a.forward + m.m22 * a.backward};
}

using FieldMap = std::vector<FieldAmplitudes>;

/// Propagation angles of one monochromatic plane wave in every region
/// r = 0 … N+1 of a stack. The Snell invariant n sin θ is shared by all
/// regions; where it exceeds n the region angle is complex and
/// cos θ = +i √(sin²θ − 1), so forward waves decay toward +z.
struct AngleSet {
  double omega = 0.0;
  cplx invariant{0.0};  // n^{(r)} sin θ^{(r)}
  std::vector<double> index;
  std::vector<cplx> sin_theta;
  std::vector<cplx> cos_theta;
  std::vector<cplx> kz;  // rad/nm

  std::size_t regions() const { return index.size(); }
  cplx theta(std::size_t r) const { return std::asin(sin_theta[r]); }
  bool propagating(std::size_t r) const;
};

/// Angles for a wave entering from the left ambient at θ_in (rad).
AngleSet snell_chain(const Stack& stack, double omega, double theta_in);
/// Angles for a given Snell invariant n sin θ (used for the idler, whose
/// transverse wave-vector is fixed by the pump and signal).
AngleSet snell_chain_invariant(const Stack& stack, double omega, cplx invariant);

/// Interface matrix between region l and l+1, l = 0 … N.
TransferMatrix boundary_matrix(const AngleSet& angles, std::size_t l, Polarization pol);
/// Free propagation across layer l, l = 1 … N.
TransferMatrix propagation_matrix(const AngleSet& angles, const Stack& stack, std::size_t l);
/// Whole-structure matrix mapping region-0 amplitudes to region-(N+1) ones.
TransferMatrix structure_matrix(const Stack& stack, const AngleSet& angles, Polarization pol);

struct TransmissionReflection {
  cplx t{0.0};
  cplx r{0.0};
};

/// Left incidence, no wave incoming from the right: r = −S21/S22, t = det S/S22.
TransmissionReflection transmission_reflection(const TransferMatrix& s);

struct PowerCoefficients {
  double transmittance = 0.0;
  double reflectance = 0.0;
};

/// Energy transmittance and reflectance for left incidence at θ_in.
PowerCoefficients power_coefficients(const Stack& stack, double omega, double theta_in, Polarization pol);

/// Amplitudes in every region for incident amplitudes from the left and right.
FieldMap internal_field(const Stack& stack, const AngleSet& angles, Polarization pol, cplx in_left,
                        cplx in_right = 0.0);

/// Matrix K with (a_F, a_B) in region 0 = K · (a_F^{out right}, a_B^{out left}).
TransferMatrix exit_channel_matrix(const TransferMatrix& s);

/// For every region r, the matrix D^{(r)} expressing the internal
/// (forward, backward) amplitudes as combinations of the two exit channels
/// (forward leaving at z_N, backward leaving at z_0). Layer entries refer to
/// the layer's left edge.
std::vector<TransferMatrix> exit_decomposition(const Stack& stack, const AngleSet& angles, Polarization pol);
TransferMatrix exit_decomposition(const Stack& stack, const AngleSet& angles, Polarization pol, std::size_t l);

/// Wavelength (nm) of the first transmission maximum on the long-wavelength
/// side of the deepest transmission gap found in [lambda_lo, lambda_hi].
double find_band_edge_resonance(const Stack& stack, Polarization pol, double theta_in, double lambda_lo,
                                double lambda_hi, double step_nm = 0.01);

}  // namespace pbg
