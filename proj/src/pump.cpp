#include "pbg/pump.hpp"

#include <cmath>

#include "pbg/error.hpp"

namespace pbg {

PumpSpec PumpSpec::cw(double wavelength_nm, double amplitude) {
  PumpSpec p;
  p.kind = PumpKind::cw;
  p.amplitude = amplitude;
  p.carrier_omega = wavelength_to_omega(wavelength_nm);
  p.validate();
  return p;
}

PumpSpec PumpSpec::gaussian(double wavelength_nm, double duration_fs, double chirp, double amplitude) {
  PumpSpec p;
  p.kind = PumpKind::gaussian;
  p.amplitude = amplitude;
  p.duration_fs = duration_fs;
  p.chirp = chirp;
  p.carrier_omega = wavelength_to_omega(wavelength_nm);
  p.validate();
  return p;
}

void PumpSpec::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ConfigError("pump amplitude must be finite and >= 0");
  if (!(carrier_omega > 0.0) || !std::isfinite(carrier_omega)) throw ConfigError("pump carrier frequency must be positive");
  if (kind == PumpKind::gaussian && !(duration_fs > 0.0)) throw ConfigError("gaussian pump needs a positive duration");
  if (!std::isfinite(chirp)) throw ConfigError("pump chirp must be finite");
  if (!(std::abs(theta) < kPi / 2)) throw ConfigError("pump incidence angle must satisfy |theta| < 90 deg");
}

cplx pump_spectrum(const PumpSpec& spec, double omega) {
  if (spec.kind != PumpKind::gaussian)
    throw ConfigError("pump_spectrum is defined for gaussian pumps only; cw pumping uses the cw path");
  const cplx q{1.0, spec.chirp};
  const double detuning = omega - spec.carrier_omega;
  const double tau = spec.duration_fs;
  return spec.amplitude * tau / std::sqrt(2.0 * q) * std::exp(-tau * tau * detuning * detuning / (4.0 * q));
}

cplx pump_envelope(const PumpSpec& spec, double t_fs) {
  if (spec.kind != PumpKind::gaussian) return spec.amplitude;
  const cplx q{1.0, spec.chirp};
  return spec.amplitude * std::exp(-q * t_fs * t_fs / (spec.duration_fs * spec.duration_fs));
}

PolarizationSplit pump_polarization_split(const PumpSpec& spec) {
  return {std::cos(spec.polarization), std::sin(spec.polarization)};
}

}  // namespace pbg
