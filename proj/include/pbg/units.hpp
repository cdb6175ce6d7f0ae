#pragma once

#include <complex>
#include <numbers>

// Project-wide units: lengths in nm, times in fs, angular frequencies in
// rad/fs, nonlinear coefficients in pm/V.
namespace pbg {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299.792458;  // nm/fs
inline constexpr cplx kI{0.0, 1.0};

inline constexpr double wavelength_to_omega(double wavelength_nm) {
  return 2.0 * kPi * kSpeedOfLight / wavelength_nm;
}

inline constexpr double omega_to_wavelength(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega;
}

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace pbg
