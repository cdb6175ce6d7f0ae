#include "pbg/observables.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "pbg/error.hpp"
#include "pbg/parallel.hpp"

namespace pbg {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void fft_forward(std::vector<cplx>& data, int rows, int cols) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = rows == 1 ? fftw_plan_dft_1d(cols, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE)
                     : fftw_plan_dft_2d(rows, cols, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw NumericalError("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

double norm_sum(const std::vector<cplx>& v, std::size_t offset, std::size_t stride, std::size_t count,
                const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < count; ++k) s += w[k] * std::norm(v[offset + k * stride]);
  return s;
}

CurveStats curve_stats(const std::vector<double>& omega, const std::vector<double>& y) {
  CurveStats s;
  if (y.empty()) return s;
  const auto it = std::max_element(y.begin(), y.end());
  s.peak = *it;
  s.peak_omega = omega[static_cast<std::size_t>(it - y.begin())];
  if (s.peak <= 0.0) return s;
  const auto [lo, hi] = half_max_bounds(omega, y);
  s.fwhm_omega = std::abs(hi - lo);
  const double a = std::min(lo, hi), b = std::max(lo, hi);
  s.fwhm_nm = omega_to_wavelength(a) - omega_to_wavelength(b);
  return s;
}

void combine(SpectrumResult& r) {
  const std::size_t n = r.signal_omega.size();
  r.signal_forward.assign(n, 0.0);
  r.signal_backward.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    r.signal_forward[k] = r.signal[index(Channel::ff)][k] + r.signal[index(Channel::fb)][k];
    r.signal_backward[k] = r.signal[index(Channel::bf)][k] + r.signal[index(Channel::bb)][k];
  }
  const std::size_t m = r.idler_omega.size();
  r.idler_forward.assign(m, 0.0);
  r.idler_backward.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    r.idler_forward[k] = r.idler[index(Channel::ff)][k] + r.idler[index(Channel::bf)][k];
    r.idler_backward[k] = r.idler[index(Channel::fb)][k] + r.idler[index(Channel::bb)][k];
  }
  for (std::size_t c = 0; c < 4; ++c) r.signal_stats[c] = curve_stats(r.signal_omega, r.signal[c]);
  r.signal_forward_stats = curve_stats(r.signal_omega, r.signal_forward);
  r.signal_backward_stats = curve_stats(r.signal_omega, r.signal_backward);
}

void require_two_points(const UniformGrid& g, const char* what) {
  if (g.size < 2) throw ConfigError(std::string(what) + " grid needs at least two points for a Fourier transform");
}

double parabolic_peak(const std::vector<double>& x, const std::vector<double>& y, std::size_t k) {
  if (k == 0 || k + 1 >= y.size()) return x[k];
  const double denom = y[k - 1] - 2.0 * y[k] + y[k + 1];
  if (denom == 0.0) return x[k];
  const double shift = 0.5 * (y[k - 1] - y[k + 1]) / denom;
  return x[k] + shift * (x[k + 1] - x[k]);
}

double reference_sum(const Stack& stack) {
  double s = 0.0;
  for (const Layer& layer : stack.layers) s += layer.chi2.max_abs() * layer.thickness_nm;
  return s;
}

double reference_amplitude(double sum, double omega_s, double omega_i, double omega_p, double pump_abs,
                           ReferenceWeight weight) {
  const double partner = weight == ReferenceWeight::as_written ? omega_p - omega_i : omega_i;
  if (partner <= 0.0) return 0.0;
  return std::sqrt(omega_s) * std::sqrt(partner) * pump_abs * sum / (2.0 * std::sqrt(2.0 * kPi) * kSpeedOfLight);
}

}  // namespace

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !(epsilon0 > 0.0) || !(c > 0.0) || !(beam_area > 0.0))
    throw ConfigError("physical constants must be strictly positive");
}

PhotonNumber joint_photon_number(const JsaGrid& jsa, Channel c, double omega_s, double omega_i, double d_omega_s,
                                 double d_omega_i, OffGrid policy) {
  const std::size_t is = jsa.signal.nearest(omega_s), ii = jsa.idler.nearest(omega_i);
  const auto off = [](const UniformGrid& g, std::size_t k, double x) {
    const double tol = 1e-9 * std::max(std::abs(g.step), std::abs(x));
    return std::abs(g[k] - x) > tol;
  };
  const bool snapped = off(jsa.signal, is, omega_s) || off(jsa.idler, ii, omega_i);
  if (snapped && policy == OffGrid::strict) throw ConfigError("frequency pair is not a grid node");
  return {std::norm(jsa.at(c, is, ii)) * d_omega_s * d_omega_i, snapped};
}

double marginal_signal_number(const JsaGrid& jsa, Channel c, std::size_t is, double d_omega_s) {
  if (is >= jsa.signal.size) throw ConfigError("signal index out of range");
  const std::vector<double> w = trapezoid_weights(jsa.idler);
  return norm_sum(jsa.sheet(c), is * jsa.idler.size, 1, jsa.idler.size, w) * d_omega_s;
}

ChannelValues total_pairs(const JsaGrid& jsa) {
  const std::vector<double> ws = trapezoid_weights(jsa.signal), wi = trapezoid_weights(jsa.idler);
  ChannelValues out{};
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t is = 0; is < jsa.signal.size; ++is)
      out[c] += ws[is] * norm_sum(jsa.sheets[c], is * jsa.idler.size, 1, jsa.idler.size, wi);
  return out;
}

SpectrumResult energy_spectrum(const JsaGrid& jsa, const PhysicalConstants& k) {
  k.validate();
  const double scale = k.hbar * k.spectral_scale();
  const std::size_t ns = jsa.signal.size, ni = jsa.idler.size;
  const std::vector<double> ws = trapezoid_weights(jsa.signal), wi = trapezoid_weights(jsa.idler);
  SpectrumResult r;
  r.signal_omega = jsa.signal.values();
  r.idler_omega = jsa.idler.values();
  for (std::size_t c = 0; c < 4; ++c) {
    r.signal[c].resize(ns);
    r.idler[c].resize(ni);
    for (std::size_t is = 0; is < ns; ++is)
      r.signal[c][is] = scale * r.signal_omega[is] * norm_sum(jsa.sheets[c], is * ni, 1, ni, wi);
    for (std::size_t ii = 0; ii < ni; ++ii)
      r.idler[c][ii] = scale * r.idler_omega[ii] * norm_sum(jsa.sheets[c], ii, ni, ns, ws);
  }
  combine(r);
  return r;
}

SpectrumResult energy_spectrum(const CwJsa& jsa, const PhysicalConstants& k) {
  k.validate();
  const double scale = k.hbar * k.spectral_scale() * kCwRateFactor;
  const std::size_t ns = jsa.signal.size;
  SpectrumResult r;
  r.signal_omega = jsa.signal.values();
  r.idler_omega.resize(ns);
  for (std::size_t is = 0; is < ns; ++is) r.idler_omega[is] = jsa.idler_omega(is);
  for (std::size_t c = 0; c < 4; ++c) {
    r.signal[c].resize(ns);
    r.idler[c].resize(ns);
    for (std::size_t is = 0; is < ns; ++is) {
      const double p = std::norm(jsa.sheets[c][is]);
      r.signal[c][is] = scale * r.signal_omega[is] * p;
      r.idler[c][is] = scale * r.idler_omega[is] * p;
    }
  }
  combine(r);
  return r;
}

TimeDomainTpa time_domain_tpa(const JsaGrid& jsa, Channel c, const TpaOptions& opt) {
  require_two_points(jsa.signal, "signal");
  require_two_points(jsa.idler, "idler");
  if (opt.padding < 2) throw ConfigError("zero-padding factor must be at least 2");
  const std::size_t ns = jsa.signal.size, ni = jsa.idler.size;
  const std::size_t ms = opt.padding * ns, mi = opt.padding * ni;
  const double s0 = jsa.signal.center(), i0 = jsa.idler.center();
  const double hs = jsa.signal.step, hi = jsa.idler.step;

  std::vector<cplx> buf(ms * mi, cplx{0.0});
  const std::vector<cplx>& sheet = jsa.sheet(c);
  for (std::size_t is = 0; is < ns; ++is)
    for (std::size_t ii = 0; ii < ni; ++ii) {
      const double weight = std::sqrt(jsa.signal[is] * jsa.idler[ii] / (s0 * i0));
      buf[is * mi + ii] = hs * hi / (2.0 * kPi) * weight * sheet[is * ni + ii];
    }
  fft_forward(buf, static_cast<int>(ms), static_cast<int>(mi));

  TimeDomainTpa out;
  const double dts = 2.0 * kPi / (static_cast<double>(ms) * hs);
  const double dti = 2.0 * kPi / (static_cast<double>(mi) * hi);
  out.tau_s = {-static_cast<double>(ms / 2) * dts, dts, ms};
  out.tau_i = {-static_cast<double>(mi / 2) * dti, dti, mi};
  out.amplitude.resize(ms * mi);
  // τ index m maps to FFT bin (m − M/2) mod M; the grid start adds e^{−iω_start τ}.
  for (std::size_t ks = 0; ks < ms; ++ks) {
    const std::size_t bs = (ks + ms - ms / 2) % ms;
    const cplx ps = std::exp(-kI * jsa.signal.start * out.tau_s[ks]);
    for (std::size_t ki = 0; ki < mi; ++ki) {
      const std::size_t bi = (ki + mi - mi / 2) % mi;
      const cplx pi = std::exp(-kI * jsa.idler.start * out.tau_i[ki]);
      out.amplitude[ks * mi + ki] = ps * pi * buf[bs * mi + bi];
    }
  }
  if (opt.normalize) {
    double total = 0.0;
    for (const cplx& v : out.amplitude) total += std::norm(v);
    total *= dts * dti;
    if (total > 0.0) {
      const double f = 1.0 / std::sqrt(total);
      for (cplx& v : out.amplitude) v *= f;
      out.normalized = true;
    }
  }
  return out;
}

TimeDomainTpa time_domain_tpa(const CwJsa& jsa, Channel c, const TpaOptions& opt) {
  require_two_points(jsa.signal, "signal");
  if (opt.padding < 2) throw ConfigError("zero-padding factor must be at least 2");
  const std::size_t ns = jsa.signal.size, ms = opt.padding * ns;
  const double s0 = jsa.signal.center(), i0 = jsa.pump_omega() - s0, hs = jsa.signal.step;
  std::vector<cplx> buf(ms, cplx{0.0});
  for (std::size_t is = 0; is < ns; ++is) {
    const double weight = std::sqrt(jsa.signal[is] * jsa.idler_omega(is) / (s0 * i0));
    buf[is] = hs / (2.0 * kPi) * weight * jsa.sheet(c)[is];
  }
  fft_forward(buf, 1, static_cast<int>(ms));
  TimeDomainTpa out;
  const double dt = 2.0 * kPi / (static_cast<double>(ms) * hs);
  out.tau_s = {-static_cast<double>(ms / 2) * dt, dt, ms};
  out.tau_i = {0.0, 0.0, 1};
  out.amplitude.resize(ms);
  for (std::size_t k = 0; k < ms; ++k)
    out.amplitude[k] = std::exp(-kI * jsa.signal.start * out.tau_s[k]) * buf[(k + ms - ms / 2) % ms];
  if (opt.normalize) {
    double total = 0.0;
    for (const cplx& v : out.amplitude) total += std::norm(v);
    total *= dt;
    if (total > 0.0) {
      const double f = 1.0 / std::sqrt(total);
      for (cplx& v : out.amplitude) v *= f;
      out.normalized = true;
    }
  }
  return out;
}

cplx tpa_direct(const JsaGrid& jsa, Channel c, double tau_s, double tau_i) {
  require_two_points(jsa.signal, "signal");
  require_two_points(jsa.idler, "idler");
  const double s0 = jsa.signal.center(), i0 = jsa.idler.center();
  const std::size_t ni = jsa.idler.size;
  cplx sum{0.0};
  for (std::size_t is = 0; is < jsa.signal.size; ++is)
    for (std::size_t ii = 0; ii < ni; ++ii) {
      const double ws = jsa.signal[is], wi = jsa.idler[ii];
      sum += std::sqrt(ws * wi / (s0 * i0)) * jsa.sheet(c)[is * ni + ii] * std::exp(-kI * (ws * tau_s + wi * tau_i));
    }
  return sum * jsa.signal.step * jsa.idler.step / (2.0 * kPi);
}

FluxResult photon_flux(const JsaGrid& jsa, const UniformGrid& tau, const PhysicalConstants& k, FluxMethod method,
                       std::size_t workers) {
  k.validate();
  if (tau.size == 0) throw ConfigError("flux time grid is empty");
  const std::size_t ns = jsa.signal.size, ni = jsa.idler.size;
  const double hs = ns > 1 ? jsa.signal.step : 1.0;
  const std::vector<double> wi = trapezoid_weights(jsa.idler);
  const double i0 = jsa.idler.center();
  std::vector<double> idler_weight(ni);
  for (std::size_t ii = 0; ii < ni; ++ii)
    idler_weight[ii] = wi[ii] * (method == FluxMethod::narrow_idler ? jsa.idler[ii] / i0 : 1.0);
  const double scale = k.hbar * k.spectral_scale() / (8.0 * kPi);

  // Pulsed grids are mostly zero outside the pump band; restrict each row to its nonzero span.
  std::vector<std::size_t> row_lo(ns, ni), row_hi(ns, 0);
  for (std::size_t is = 0; is < ns; ++is)
    for (const auto& sheet : jsa.sheets)
      for (std::size_t ii = 0; ii < ni; ++ii)
        if (sheet[is * ni + ii] != 0.0) {
          row_lo[is] = std::min(row_lo[is], ii);
          row_hi[is] = std::max(row_hi[is], ii + 1);
        }

  FluxResult out;
  out.tau = tau;
  for (auto& f : out.flux) f.assign(tau.size, 0.0);
  parallel_for(tau.size, workers, [&](std::size_t t) {
    std::vector<cplx> field(ni);
    for (std::size_t c = 0; c < 4; ++c) {
      std::fill(field.begin(), field.end(), cplx{0.0});
      const std::vector<cplx>& sheet = jsa.sheets[c];
      for (std::size_t is = 0; is < ns; ++is) {
        if (row_lo[is] >= row_hi[is]) continue;
        const double ws = jsa.signal[is];
        const cplx coeff = hs * std::sqrt(ws) * std::exp(-kI * ws * tau[t]);
        const cplx* row = sheet.data() + is * ni;
        for (std::size_t ii = row_lo[is]; ii < row_hi[is]; ++ii) field[ii] += coeff * row[ii];
      }
      double acc = 0.0;
      for (std::size_t ii = 0; ii < ni; ++ii) acc += idler_weight[ii] * std::norm(field[ii]);
      out.flux[c][t] = scale * acc;
    }
  });

  const std::vector<double> taus = tau.values();
  for (std::size_t c = 0; c < 4; ++c) {
    const auto& y = out.flux[c];
    const auto it = std::max_element(y.begin(), y.end());
    auto& s = out.stats[c];
    s.peak = *it;
    if (s.peak <= 0.0) continue;
    s.delay = parabolic_peak(taus, y, static_cast<std::size_t>(it - y.begin()));
    s.fwhm = fwhm(taus, y);
  }
  return out;
}

HomScan hom_scan(const JsaGrid& jsa, Channel c, const std::vector<double>& tau, double window_fraction) {
  const UniformGrid& gs = jsa.signal;
  const UniformGrid& gi = jsa.idler;
  const double tol = 1e-12 * std::max(std::abs(gs.start), 1.0);
  if (gs.size != gi.size || std::abs(gs.start - gi.start) > tol || std::abs(gs.step - gi.step) > tol)
    throw ConfigError("HOM scan needs identical signal and idler grids");
  const std::size_t g = gs.size;
  const std::vector<double> w = trapezoid_weights(gs);
  const std::vector<cplx>& phi = jsa.sheet(c);

  // Group the overlap by index difference d = i_i − i_s, so that
  // ρ(τ) = Re Σ_d C[d] e^{i d h τ} / R_0.
  std::vector<cplx> overlap(2 * g - 1, cplx{0.0});
  double r0 = 0.0;
  for (std::size_t j = 0; j < g; ++j)
    for (std::size_t m = 0; m < g; ++m) {
      const double weight = w[j] * w[m] * gs[j] * gs[m];
      const cplx a = phi[j * g + m];
      overlap[m + g - 1 - j] += weight * a * std::conj(phi[m * g + j]);
      r0 += weight * std::norm(a);
    }
  if (!(r0 > 0.0)) throw NumericalError("HOM normalization vanishes (zero amplitude)");

  HomScan scan;
  scan.tau = tau;
  scan.rn.resize(tau.size());
  for (std::size_t t = 0; t < tau.size(); ++t) {
    double rho = 0.0;
    for (std::size_t d = 0; d < overlap.size(); ++d) {
      const double shift = (static_cast<double>(d) - static_cast<double>(g - 1)) * gs.step;
      rho += (overlap[d] * std::exp(kI * shift * tau[t])).real();
    }
    scan.rn[t] = 1.0 - rho / r0;
  }
  scan.dip = dip_statistics(scan.tau, scan.rn, window_fraction);
  return scan;
}

HomScan hom_scan(const CwJsa& jsa, Channel c, const std::vector<double>& tau, double window_fraction) {
  const UniformGrid& gs = jsa.signal;
  const std::size_t g = gs.size;
  const double mirror_error = std::abs(gs.start + gs.back() - jsa.pump_omega());
  if (mirror_error > 1e-9 * jsa.pump_omega())
    throw ConfigError("cw HOM scan needs a signal grid symmetric about half the pump frequency");
  const std::vector<double> w = trapezoid_weights(gs);
  const std::vector<cplx>& phi = jsa.sheet(c);
  std::vector<cplx> term(g);
  std::vector<double> detuning(g);
  double r0 = 0.0;
  for (std::size_t j = 0; j < g; ++j) {
    const double ws = gs[j], wi = jsa.idler_omega(j);
    const double weight = w[j] * ws * wi;
    term[j] = weight * phi[j] * std::conj(phi[g - 1 - j]);
    detuning[j] = wi - ws;
    r0 += weight * std::norm(phi[j]);
  }
  if (!(r0 > 0.0)) throw NumericalError("HOM normalization vanishes (zero amplitude)");
  HomScan scan;
  scan.tau = tau;
  scan.rn.resize(tau.size());
  for (std::size_t t = 0; t < tau.size(); ++t) {
    double rho = 0.0;
    for (std::size_t j = 0; j < g; ++j) rho += (term[j] * std::exp(kI * detuning[j] * tau[t])).real();
    scan.rn[t] = 1.0 - rho / r0;
  }
  scan.dip = dip_statistics(scan.tau, scan.rn, window_fraction);
  return scan;
}

DipStatistics dip_statistics(const std::vector<double>& tau, const std::vector<double>& rn, double window_fraction) {
  if (tau.size() != rn.size() || tau.empty()) throw ConfigError("dip statistics need matching, non-empty curves");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ConfigError("dip window fraction must be in (0, 1]");
  const double mid = 0.5 * (tau.front() + tau.back());
  const double half_span = 0.5 * window_fraction * std::abs(tau.back() - tau.front());
  std::size_t best = tau.size();
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (std::abs(tau[k] - mid) > half_span * (1.0 + 1e-12)) continue;
    if (best == tau.size() || std::abs(1.0 - rn[k]) > std::abs(1.0 - rn[best])) best = k;
  }
  if (best == tau.size()) best = tau.size() / 2;

  DipStatistics d;
  d.center = tau[best];
  d.rho_peak = 1.0 - rn[best];
  d.visibility = d.rho_peak / (2.0 - d.rho_peak);
  if (d.rho_peak == 0.0) return d;
  const double level = 1.0 - 0.5 * d.rho_peak;
  const bool dip = d.rho_peak > 0.0;
  const auto inside = [&](std::size_t k) { return dip ? rn[k] < level : rn[k] > level; };
  const auto crossing = [&](std::size_t in, std::size_t out) {
    const double f = (level - rn[in]) / (rn[out] - rn[in]);
    return tau[in] + f * (tau[out] - tau[in]);
  };
  std::size_t first = 0;
  while (!inside(first)) ++first;
  std::size_t last = tau.size() - 1;
  while (!inside(last)) --last;
  const double left = first == 0 ? tau.front() : crossing(first, first - 1);
  const double right = last + 1 == tau.size() ? tau.back() : crossing(last, last + 1);
  d.width = right - left;
  return d;
}

std::pair<double, double> half_max_bounds(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw ConfigError("FWHM needs matching, non-empty curves");
  const double peak = *std::max_element(y.begin(), y.end());
  if (!(peak > 0.0)) return {x.front(), x.front()};
  const double half = 0.5 * peak;
  std::size_t first = 0;
  while (y[first] < half) ++first;
  std::size_t last = y.size() - 1;
  while (y[last] < half) --last;
  const auto interp = [&](std::size_t in, std::size_t out) {
    return x[in] + (half - y[in]) / (y[out] - y[in]) * (x[out] - x[in]);
  };
  const double lo = first == 0 ? x.front() : interp(first, first - 1);
  const double hi = last + 1 == y.size() ? x.back() : interp(last, last + 1);
  return {lo, hi};
}

double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  const auto [lo, hi] = half_max_bounds(x, y);
  return std::abs(hi - lo);
}

JsaGrid reference_jsa(const Stack& stack, const PumpSpec& pump, const UniformGrid& signal, const UniformGrid& idler,
                      ReferenceWeight weight) {
  if (pump.kind != PumpKind::gaussian) throw ConfigError("reference_jsa needs a gaussian pump");
  const double sum = reference_sum(stack);
  JsaGrid out;
  out.signal = signal;
  out.idler = idler;
  out.pump = pump;
  out.stack_hash = stack_hash(stack);
  for (auto& s : out.sheets) s.assign(signal.size * idler.size, cplx{0.0});
  for (std::size_t is = 0; is < signal.size; ++is)
    for (std::size_t ii = 0; ii < idler.size; ++ii) {
      const double omega_p = signal[is] + idler[ii];
      const double e = std::abs(pump_spectrum(pump, omega_p));
      out.at(Channel::ff, is, ii) = reference_amplitude(sum, signal[is], idler[ii], omega_p, e, weight);
    }
  return out;
}

CwJsa reference_jsa_cw(const Stack& stack, const PumpSpec& pump, const UniformGrid& signal, ReferenceWeight weight) {
  if (pump.kind != PumpKind::cw) throw ConfigError("reference_jsa_cw needs a cw pump");
  const double sum = reference_sum(stack);
  CwJsa out;
  out.signal = signal;
  out.pump = pump;
  out.stack_hash = stack_hash(stack);
  for (auto& s : out.sheets) s.assign(signal.size, cplx{0.0});
  for (std::size_t is = 0; is < signal.size; ++is)
    out.sheets[index(Channel::ff)][is] = reference_amplitude(sum, signal[is], out.idler_omega(is), pump.carrier_omega,
                                                             pump.amplitude, weight);
  return out;
}

EfficiencyReport relative_efficiency(const SpectrumResult& spectrum, const SpectrumResult& reference, std::size_t is) {
  if (is >= spectrum.signal_omega.size() || is >= reference.signal_omega.size())
    throw ConfigError("signal index out of range");
  double ref = 0.0;
  for (std::size_t c = 0; c < 4; ++c) ref += reference.signal[c][is];
  if (!(ref > 0.0)) throw NumericalError("reference spectrum vanishes; efficiency undefined at this frequency");
  EfficiencyReport r;
  for (std::size_t c = 0; c < 4; ++c) {
    r.eta[c] = spectrum.signal[c][is] / ref;
    r.total += r.eta[c];
  }
  return r;
}

EfficiencyReport efficiency_at(const Stack& stack, const PumpSpec& pump, const EmissionGeometry& geometry,
                               double omega_s, ReferenceWeight weight, std::size_t idler_points, double bandwidths) {
  if (pump.kind == PumpKind::cw) {
    const UniformGrid one{omega_s, 0.0, 1};
    const CwJsa j = jsa_cw(stack, pump, geometry, one, 1);
    const CwJsa r = reference_jsa_cw(stack, pump, one, weight);
    return relative_efficiency(energy_spectrum(j), energy_spectrum(r), 0);
  }
  if (idler_points < 3) throw ConfigError("efficiency integration needs at least three idler points");
  const double width = 2.0 * std::sqrt(1.0 + pump.chirp * pump.chirp) / pump.duration_fs;
  const double centre = pump.carrier_omega - omega_s;
  if (!(centre - bandwidths * width > 0.0)) throw ConfigError("idler band reaches non-positive frequencies");
  const UniformGrid one{omega_s, 0.0, 1};
  const UniformGrid idler = UniformGrid::span(centre - bandwidths * width, centre + bandwidths * width, idler_points);
  const JsaGrid j = jsa(stack, pump, geometry, one, idler, 1);
  const JsaGrid r = reference_jsa(stack, pump, one, idler, weight);
  return relative_efficiency(energy_spectrum(j), energy_spectrum(r), 0);
}

}  // namespace pbg
