#include "pbg/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pbg/error.hpp"

namespace pbg {

namespace {

constexpr double kGrazingCutoff = 1e-9;
constexpr double kSingularCutoff = 1e-14;

cplx forward_cos(cplx sin_theta) {
  cplx c = std::sqrt(1.0 - sin_theta * sin_theta);
  if (c.imag() < 0.0 || (c.imag() == 0.0 && c.real() < 0.0)) c = -c;
  return c;
}

}  // namespace

TransferMatrix TransferMatrix::inverse() const {
  const cplx d = det();
  if (std::abs(d) < kSingularCutoff) throw SingularError("transfer matrix is not invertible");
  return {m22 / d, -m12 / d, -m21 / d, m11 / d};
}

bool AngleSet::propagating(std::size_t r) const {
  return std::abs(sin_theta[r].imag()) == 0.0 && std::abs(sin_theta[r].real()) < 1.0;
}

AngleSet snell_chain_invariant(const Stack& stack, double omega, cplx invariant) {
  if (!(omega > 0.0)) throw ConfigError("angular frequency must be positive");
  const double wavelength = omega_to_wavelength(omega);
  const std::size_t regions = stack.regions();
  AngleSet a;
  a.omega = omega;
  a.invariant = invariant;
  a.index.resize(regions);
  a.sin_theta.resize(regions);
  a.cos_theta.resize(regions);
  a.kz.resize(regions);
  for (std::size_t r = 0; r < regions; ++r) {
    const double n = refractive_index(stack.region_material(r), wavelength);
    a.index[r] = n;
    a.sin_theta[r] = invariant / n;
    a.cos_theta[r] = forward_cos(a.sin_theta[r]);
    a.kz[r] = n * omega / kSpeedOfLight * a.cos_theta[r];
  }
  return a;
}

AngleSet snell_chain(const Stack& stack, double omega, double theta_in) {
  if (!(std::abs(theta_in) < kPi / 2)) throw ConfigError("incidence angle must satisfy |theta| < 90 deg");
  const double n0 = refractive_index(stack.ambient_left, omega_to_wavelength(omega));
  return snell_chain_invariant(stack, omega, cplx{n0 * std::sin(theta_in), 0.0});
}

TransferMatrix boundary_matrix(const AngleSet& angles, std::size_t l, Polarization pol) {
  const cplx cos_next = angles.cos_theta.at(l + 1);
  if (std::abs(cos_next) < kGrazingCutoff) {
    std::ostringstream msg;
    msg << "grazing propagation at boundary " << l << " (|cos theta| = " << std::abs(cos_next) << ")";
    throw DegenerateAngleError(msg.str());
  }
  const cplx f = angles.cos_theta[l] / cos_next;
  const double g = angles.index[l] / angles.index[l + 1];
  if (pol == Polarization::te) {
    const cplx fg = f * g;
    return {0.5 * (1.0 + fg), 0.5 * (1.0 - fg), 0.5 * (1.0 - fg), 0.5 * (1.0 + fg)};
  }
  return {0.5 * (f + g), 0.5 * (f - g), 0.5 * (f - g), 0.5 * (f + g)};
}

TransferMatrix propagation_matrix(const AngleSet& angles, const Stack& stack, std::size_t l) {
  const cplx phase = kI * angles.kz.at(l) * stack.region_thickness(l);
  return TransferMatrix::diagonal(std::exp(phase), std::exp(-phase));
}

TransferMatrix structure_matrix(const Stack& stack, const AngleSet& angles, Polarization pol) {
  TransferMatrix s = boundary_matrix(angles, 0, pol);
  for (std::size_t l = 1; l <= stack.size(); ++l)
    s = boundary_matrix(angles, l, pol) * (propagation_matrix(angles, stack, l) * s);
  return s;
}

TransmissionReflection transmission_reflection(const TransferMatrix& s) {
  if (std::abs(s.m22) < kSingularCutoff) throw SingularError("structure matrix element S22 vanishes");
  return {s.det() / s.m22, -s.m21 / s.m22};
}

PowerCoefficients power_coefficients(const Stack& stack, double omega, double theta_in, Polarization pol) {
  const AngleSet angles = snell_chain(stack, omega, theta_in);
  const auto [t, r] = transmission_reflection(structure_matrix(stack, angles, pol));
  const std::size_t last = angles.regions() - 1;
  const cplx flux_out = angles.index[last] * angles.cos_theta[last];
  const cplx flux_in = angles.index[0] * angles.cos_theta[0];
  return {std::norm(t) * flux_out.real() / flux_in.real(), std::norm(r)};
}

FieldMap internal_field(const Stack& stack, const AngleSet& angles, Polarization pol, cplx in_left, cplx in_right) {
  const TransferMatrix s = structure_matrix(stack, angles, pol);
  if (std::abs(s.m22) < kSingularCutoff) throw SingularError("structure matrix element S22 vanishes");
  FieldMap map(stack.regions());
  map[0] = {in_left, (in_right - s.m21 * in_left) / s.m22};
  map[1] = boundary_matrix(angles, 0, pol) * map[0];
  for (std::size_t l = 1; l <= stack.size(); ++l)
    map[l + 1] = boundary_matrix(angles, l, pol) * (propagation_matrix(angles, stack, l) * map[l]);
  return map;
}

TransferMatrix exit_channel_matrix(const TransferMatrix& s) {
  if (std::abs(s.m11) < kSingularCutoff) throw SingularError("structure matrix element S11 vanishes");
  return {1.0 / s.m11, -s.m12 / s.m11, 0.0, 1.0};
}

std::vector<TransferMatrix> exit_decomposition(const Stack& stack, const AngleSet& angles, Polarization pol) {
  const std::size_t n = stack.size();
  std::vector<TransferMatrix> bounds(n + 1);
  for (std::size_t l = 0; l <= n; ++l) bounds[l] = boundary_matrix(angles, l, pol);
  std::vector<TransferMatrix> props(n + 1);
  for (std::size_t l = 1; l <= n; ++l) props[l] = propagation_matrix(angles, stack, l);

  TransferMatrix s = bounds[0];
  for (std::size_t l = 1; l <= n; ++l) s = bounds[l] * (props[l] * s);

  std::vector<TransferMatrix> out(n + 2);
  out[0] = exit_channel_matrix(s);
  out[1] = bounds[0] * out[0];
  for (std::size_t l = 1; l <= n; ++l) out[l + 1] = bounds[l] * (props[l] * out[l]);
  return out;
}

TransferMatrix exit_decomposition(const Stack& stack, const AngleSet& angles, Polarization pol, std::size_t l) {
  if (l < 1 || l > stack.size()) throw ConfigError("layer index out of range");
  return exit_decomposition(stack, angles, pol)[l];
}

double find_band_edge_resonance(const Stack& stack, Polarization pol, double theta_in, double lambda_lo,
                                double lambda_hi, double step_nm) {
  if (!(lambda_hi > lambda_lo) || !(step_nm > 0.0)) throw ConfigError("invalid resonance search window");
  auto transmittance = [&](double wl) {
    return power_coefficients(stack, wavelength_to_omega(wl), theta_in, pol).transmittance;
  };
  const auto steps = static_cast<std::size_t>(std::ceil((lambda_hi - lambda_lo) / step_nm));
  std::vector<double> wl(steps + 1), tr(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    wl[k] = std::min(lambda_lo + static_cast<double>(k) * step_nm, lambda_hi);
    tr[k] = transmittance(wl[k]);
  }
  const auto gap = static_cast<std::size_t>(std::min_element(tr.begin(), tr.end()) - tr.begin());
  std::size_t peak = 0;
  for (std::size_t k = gap + 1; k + 1 < tr.size(); ++k) {
    if (tr[k] >= tr[k - 1] && tr[k] > tr[k + 1]) {
      peak = k;
      break;
    }
  }
  if (peak == 0) throw NumericalError("no transmission maximum on the long-wavelength side of the gap");

  // Golden-section refinement on the bracketing samples.
  double a = wl[peak - 1], b = wl[peak + 1];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = transmittance(c), fd = transmittance(d);
  for (int it = 0; it < 80 && (b - a) > 1e-9; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = transmittance(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = transmittance(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace pbg
