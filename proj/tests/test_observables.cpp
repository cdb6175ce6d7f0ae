#include <doctest.h>

#include <cmath>
#include <functional>

#include "pbg/error.hpp"
#include "pbg/observables.hpp"
#include "support.hpp"

using namespace pbg;

namespace {

using Shape = std::function<cplx(double, double)>;

JsaGrid synthetic(const UniformGrid& signal, const UniformGrid& idler, const Shape& ff, const Shape& bb = {}) {
  JsaGrid j;
  j.signal = signal;
  j.idler = idler;
  j.pump = PumpSpec::gaussian(664.5, 200.0);
  for (auto& s : j.sheets) s.assign(signal.size * idler.size, cplx{0.0});
  for (std::size_t is = 0; is < signal.size; ++is)
    for (std::size_t ii = 0; ii < idler.size; ++ii) {
      j.at(Channel::ff, is, ii) = ff(signal[is], idler[ii]);
      if (bb) j.at(Channel::bb, is, ii) = bb(signal[is], idler[ii]);
    }
  return j;
}

double gauss(double x, double x0, double sigma) { return std::exp(-(x - x0) * (x - x0) / (2.0 * sigma * sigma)); }

// Correlated, non-separable, complex test amplitude that vanishes on the grid border.
JsaGrid bumpy(std::size_t g, double lo = 1.1, double hi = 1.4) {
  const UniformGrid grid = UniformGrid::span(lo, hi, g);
  const double mid = 0.5 * (lo + hi), s = 0.12 * (hi - lo);
  JsaGrid j = synthetic(grid, grid, [&](double a, double b) {
    return gauss(a, mid + 0.2 * s, s) * gauss(b, mid - 0.1 * s, 1.3 * s) *
           std::exp(kI * (40.0 * a - 25.0 * b + 300.0 * (a - mid) * (b - mid)));
  });
  for (Channel c : kChannels)
    for (std::size_t k = 0; k < g; ++k) {
      j.at(c, 0, k) = j.at(c, k, 0) = 0.0;
      j.at(c, g - 1, k) = j.at(c, k, g - 1) = 0.0;
    }
  return j;
}

std::vector<double> linspace(double a, double b, std::size_t n) { return UniformGrid::span(a, b, n).values(); }

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("photon numbers: nodes, marginals and totals are consistent") {
    const UniformGrid s = UniformGrid::span(1.0, 1.2, 11), i = UniformGrid::span(0.9, 1.3, 21);
    const JsaGrid j = synthetic(s, i, [](double a, double b) { return cplx(a - b, a * b); });
    const auto p = joint_photon_number(j, Channel::ff, s[3], i[7], 0.01, 0.02);
    CHECK_FALSE(p.snapped);
    CHECK(p.value == doctest::Approx(std::norm(cplx(s[3] - i[7], s[3] * i[7])) * 2e-4).epsilon(1e-14));
    const auto snapped = joint_photon_number(j, Channel::ff, s[3] + 0.3 * s.step, i[7], 1.0, 1.0);
    CHECK(snapped.snapped);
    CHECK(snapped.value == doctest::Approx(std::norm(j.at(Channel::ff, 3, 7))));
    CHECK_THROWS_AS(joint_photon_number(j, Channel::ff, s[3] + 0.3 * s.step, i[7], 1.0, 1.0, OffGrid::strict),
                    ConfigError);

    const auto ws = trapezoid_weights(s), wi = trapezoid_weights(i);
    double by_nodes = 0.0, by_rows = 0.0;
    for (std::size_t a = 0; a < s.size; ++a) {
      by_rows += marginal_signal_number(j, Channel::ff, a, ws[a]);
      for (std::size_t b = 0; b < i.size; ++b) by_nodes += joint_photon_number(j, Channel::ff, s[a], i[b], ws[a], wi[b]).value;
    }
    const ChannelValues totals = total_pairs(j);
    CHECK(by_nodes == doctest::Approx(totals[0]).epsilon(1e-12));
    CHECK(by_rows == doctest::Approx(totals[0]).epsilon(1e-12));
    CHECK(totals[1] == 0.0);
    // Polynomial of degree 4 in each variable: compare against the closed-form integral loosely.
    CHECK(totals[0] > 0.0);
  }

  TEST_CASE("energy spectra follow the trapezoid rule and scale with the constants") {
    const UniformGrid s = UniformGrid::span(1.0, 1.2, 9), i = UniformGrid::span(0.8, 1.0, 13);
    const JsaGrid j = synthetic(s, i, [](double a, double b) { return cplx(gauss(a, 1.1, 0.05) * gauss(b, 0.9, 0.04)); },
                                [](double a, double b) { return cplx(0.0, 0.5 * a * b); });
    PhysicalConstants k;
    k.hbar = 2.0;
    k.epsilon0 = 0.5;
    k.beam_area = 4.0;
    const SpectrumResult r = energy_spectrum(j, k);
    const auto wi = trapezoid_weights(i), ws = trapezoid_weights(s);
    for (std::size_t a = 0; a < s.size; ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < i.size; ++b) row += wi[b] * std::norm(j.at(Channel::ff, a, b));
      CHECK(r.signal[0][a] == doctest::Approx(2.0 * 0.5 * s[a] * row).epsilon(1e-13));
      CHECK(r.signal_forward[a] == doctest::Approx(r.signal[0][a] + r.signal[1][a]));
      CHECK(r.signal_backward[a] == doctest::Approx(r.signal[2][a] + r.signal[3][a]));
      CHECK(r.signal[0][a] >= 0.0);
    }
    for (std::size_t b = 0; b < i.size; ++b) {
      double col = 0.0;
      for (std::size_t a = 0; a < s.size; ++a) col += ws[a] * std::norm(j.at(Channel::bb, a, b));
      CHECK(r.idler[3][b] == doctest::Approx(0.5 * 2.0 * i[b] * col).epsilon(1e-13));
      CHECK(r.idler_backward[b] == doctest::Approx(r.idler[1][b] + r.idler[3][b]));
    }
    CHECK(r.signal_stats[0].peak == doctest::Approx(*std::max_element(r.signal[0].begin(), r.signal[0].end())));
    CHECK(r.signal_stats[0].fwhm_nm > 0.0);
    PhysicalConstants bad;
    bad.beam_area = 0.0;
    CHECK_THROWS_AS(energy_spectrum(j, bad), ConfigError);
  }

  TEST_CASE("cw spectra carry the rate factor") {
    CwJsa j;
    j.signal = UniformGrid::span(1.0, 1.5, 6);
    j.pump = PumpSpec::cw(664.5);
    for (auto& s : j.sheets) s.assign(6, cplx{0.0});
    for (std::size_t k = 0; k < 6; ++k) j.sheets[0][k] = cplx(1.0 + k, -0.5);
    const SpectrumResult r = energy_spectrum(j);
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(r.signal[0][k] == doctest::Approx(j.signal[k] * std::norm(j.sheets[0][k]) / (2.0 * kPi)));
      CHECK(r.idler[0][k] == doctest::Approx(j.idler_omega(k) * std::norm(j.sheets[0][k]) / (2.0 * kPi)));
      CHECK(r.idler_omega[k] == doctest::Approx(j.pump.carrier_omega - j.signal[k]));
    }
  }

  TEST_CASE("FFT two-photon amplitude equals the direct double sum on a 32x32 grid") {
    const JsaGrid j = bumpy(32);
    const TimeDomainTpa fft = time_domain_tpa(j, Channel::ff, {2, false});
    REQUIRE(fft.tau_s.size == 64);
    double scale = 0.0;
    for (const cplx& v : fft.amplitude) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (std::size_t a = 0; a < fft.tau_s.size; ++a)
      for (std::size_t b = 0; b < fft.tau_i.size; ++b)
        worst = std::max(worst, std::abs(fft.at(a, b) - tpa_direct(j, Channel::ff, fft.tau_s[a], fft.tau_i[b])));
    CHECK(worst <= 1e-10 * scale);
    // Larger padding samples the same function more finely.
    const TimeDomainTpa fine = time_domain_tpa(j, Channel::ff, {3, false});
    CHECK(std::abs(fine.at(37, 50) - tpa_direct(j, Channel::ff, fine.tau_s[37], fine.tau_i[50])) <= 1e-10 * scale);
  }

  TEST_CASE("Gaussian amplitude transforms to a Gaussian of the reciprocal width") {
    const double sigma = 0.02;
    const UniformGrid g = UniformGrid::span(1.0 - 10 * sigma, 1.0 + 10 * sigma, 81);
    // Divide out the √(ω_s ω_i/ω_s⁰ω_i⁰) weight so the transformed function is an exact Gaussian.
    const JsaGrid j = synthetic(g, g, [&](double a, double b) {
      return cplx(gauss(a, 1.0, sigma) * gauss(b, 1.0, sigma) / std::sqrt(a * b));
    });
    const TimeDomainTpa raw = time_domain_tpa(j, Channel::ff, {4, false});
    const std::size_t zero = raw.tau_s.size / 2;
    CHECK(raw.tau_s[zero] == 0.0);
    CHECK(std::abs(raw.at(zero, zero)) == doctest::Approx(sigma * sigma).epsilon(1e-10));
    const TimeDomainTpa norm = time_domain_tpa(j, Channel::ff);
    CHECK(norm.normalized);
    const std::size_t z = norm.tau_s.size / 2;
    CHECK(std::norm(norm.at(z, z)) == doctest::Approx(sigma * sigma / kPi).epsilon(1e-8));
    std::vector<double> cut(raw.tau_s.size);
    for (std::size_t a = 0; a < cut.size(); ++a) cut[a] = std::norm(raw.at(a, zero));
    CHECK(fwhm(raw.tau_s.values(), cut) == doctest::Approx(2.0 * std::sqrt(std::log(2.0)) / sigma).epsilon(0.02));
  }

  TEST_CASE("cw two-photon amplitude against a direct sum") {
    CwJsa j;
    j.pump = PumpSpec::cw(664.5);
    const double half = 0.5 * j.pump.carrier_omega;
    j.signal = UniformGrid::span(0.8 * half, 1.2 * half, 40);
    for (auto& s : j.sheets) s.assign(40, cplx{0.0});
    for (std::size_t k = 0; k < 40; ++k) j.sheets[0][k] = gauss(j.signal[k], half, 0.05 * half) * std::exp(kI * 30.0 * j.signal[k]);
    const TimeDomainTpa t = time_domain_tpa(j, Channel::ff, {2, false});
    const double s0 = j.signal.center(), i0 = j.pump.carrier_omega - s0;
    for (std::size_t m : {0u, 17u, 40u, 63u}) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < 40; ++k)
        sum += std::sqrt(j.signal[k] * j.idler_omega(k) / (s0 * i0)) * j.sheets[0][k] *
               std::exp(-kI * j.signal[k] * t.tau_s[m]);
      CHECK(std::abs(t.at(m, 0) - sum * j.signal.step / (2.0 * kPi)) < 1e-12);
    }
    CHECK_THROWS_AS(time_domain_tpa(j, Channel::ff, {1, true}), ConfigError);
  }

  TEST_CASE("flux over one full period conserves the spectral energy") {
    const JsaGrid j = bumpy(24, 1.2, 1.5);
    PhysicalConstants k;
    k.hbar = 3.0;
    k.beam_area = 0.25;
    const double period = 2.0 * kPi / j.signal.step;
    const std::size_t m = 40;
    const UniformGrid tau{-0.3 * period, period / m, m};
    const FluxResult f = photon_flux(j, tau, k);
    double time_integral = 0.0;
    for (double v : f.flux[0]) time_integral += v * tau.step;
    const SpectrumResult s = energy_spectrum(j, k);
    double spectral = 0.0;
    for (double v : s.signal[0]) spectral += v * j.signal.step;
    CHECK(time_integral == doctest::Approx(0.25 * spectral).epsilon(1e-10));
  }

  TEST_CASE("flux methods agree with direct evaluation") {
    const JsaGrid j = bumpy(20);
    const UniformGrid tau = UniformGrid::span(-300.0, 300.0, 31);
    const FluxResult dbl = photon_flux(j, tau, {}, FluxMethod::double_frequency, 3);
    const FluxResult nar = photon_flux(j, tau, {}, FluxMethod::narrow_idler, 1);
    const auto wi = trapezoid_weights(j.idler);
    const double i0 = j.idler.center();
    for (std::size_t t : {0u, 11u, 15u, 30u}) {
      double a = 0.0, b = 0.0;
      for (std::size_t ii = 0; ii < j.idler.size; ++ii) {
        cplx field = 0.0;
        for (std::size_t is = 0; is < j.signal.size; ++is)
          field += j.signal.step * std::sqrt(j.signal[is]) * j.at(Channel::ff, is, ii) * std::exp(-kI * j.signal[is] * tau[t]);
        a += wi[ii] * std::norm(field);
        b += wi[ii] * j.idler[ii] / i0 * std::norm(field);
      }
      CHECK(dbl.flux[0][t] == doctest::Approx(a / (8.0 * kPi)).epsilon(1e-12));
      CHECK(nar.flux[0][t] == doctest::Approx(b / (8.0 * kPi)).epsilon(1e-12));
    }
    CHECK(dbl.stats[1].peak == 0.0);
  }

  TEST_CASE("flux peaks at the group delay imprinted on the amplitude") {
    const double delay = 150.0;
    const UniformGrid g = UniformGrid::span(1.3, 1.5, 64);
    const JsaGrid j = synthetic(g, g, [&](double a, double b) {
      return cplx(gauss(a + b, 2.8, 0.01) * gauss(a - b, 0.0, 0.08)) * std::exp(kI * a * delay);
    });
    const FluxResult f = photon_flux(j, UniformGrid::span(-400.0, 400.0, 801));
    CHECK(f.stats[0].delay == doctest::Approx(delay).epsilon(2e-3));
    CHECK(f.stats[0].fwhm > 0.0);
  }

  TEST_CASE("HOM: frequency overlap equals the time-domain overlap") {
    const std::size_t g = 32;
    const JsaGrid j = bumpy(g);
    const std::size_t m = 2 * g;  // ≥ 2G−1 keeps the discrete orthogonality exact
    const double dt = 2.0 * kPi / (static_cast<double>(m) * j.signal.step);
    std::vector<cplx> b(m * m);
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q) b[p * m + q] = tpa_direct(j, Channel::ff, p * dt, q * dt);
    const std::vector<double> taus{0.0, 37.0, -120.0};
    const HomScan scan = hom_scan(j, Channel::ff, taus);
    for (std::size_t t = 0; t < taus.size(); ++t) {
      cplx overlap = 0.0;
      double norm = 0.0;
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
          const cplx a = b[p * m + q];
          overlap += a * std::conj(tpa_direct(j, Channel::ff, q * dt + taus[t], p * dt - taus[t]));
          norm += std::norm(a);
        }
      CHECK(scan.rn[t] == doctest::Approx(1.0 - overlap.real() / norm).epsilon(1e-6));
    }
  }

  TEST_CASE("HOM: exchange-symmetric amplitudes show a full dip at zero delay") {
    const UniformGrid g = UniformGrid::span(1.2, 1.5, 41);
    const JsaGrid j = synthetic(g, g, [](double a, double b) {
      return cplx(gauss(a + b, 2.7, 0.05) * gauss(a - b, 0.0, 0.1));
    });
    const HomScan scan = hom_scan(j, Channel::ff, linspace(-300.0, 300.0, 601));
    CHECK(std::abs(scan.rn[300]) < 1e-6);
    CHECK(scan.dip.center == doctest::Approx(0.0));
    CHECK(scan.dip.visibility == doctest::Approx(1.0).epsilon(1e-6));
    for (double v : scan.rn) {
      CHECK(v >= -1e-12);
      CHECK(v <= 2.0 + 1e-12);
    }
    CHECK(scan.rn.front() == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("HOM: cw scan with mirrored grid") {
    CwJsa j;
    j.pump = PumpSpec::cw(664.5);
    const double half = 0.5 * j.pump.carrier_omega;
    j.signal = UniformGrid::span(0.8 * half, 1.2 * half, 201);
    for (auto& s : j.sheets) s.assign(201, cplx{0.0});
    for (std::size_t k = 0; k < 201; ++k) j.sheets[0][k] = gauss(j.signal[k], half, 0.02);
    const HomScan scan = hom_scan(j, Channel::ff, linspace(-400.0, 400.0, 801));
    CHECK(std::abs(scan.rn[400]) < 1e-6);
    // |φ|² = exp(−x²/σ²) against the phase e^{−2ixτ}: ρ(τ) = exp(−σ²τ²).
    CHECK(scan.dip.width == doctest::Approx(2.0 * std::sqrt(std::log(2.0)) / 0.02).epsilon(0.01));
    j.signal = UniformGrid::span(0.8 * half, 1.1 * half, 201);
    CHECK_THROWS_AS(hom_scan(j, Channel::ff, {0.0}), ConfigError);
  }

  TEST_CASE("HOM input errors") {
    const JsaGrid rect = synthetic(UniformGrid::span(1.0, 1.2, 5), UniformGrid::span(1.0, 1.2, 6),
                                   [](double, double) { return cplx(1.0); });
    CHECK_THROWS_AS(hom_scan(rect, Channel::ff, {0.0}), ConfigError);
    const JsaGrid sq = synthetic(UniformGrid::span(1.0, 1.2, 5), UniformGrid::span(1.0, 1.2, 5),
                                 [](double, double) { return cplx(1.0); });
    CHECK_THROWS_AS(hom_scan(sq, Channel::fb, {0.0}), NumericalError);
  }

  TEST_CASE("dip statistics") {
    const std::vector<double> tau = linspace(-500.0, 500.0, 2001);
    std::vector<double> rn(tau.size()), bump(tau.size());
    const double sigma = 60.0;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      rn[k] = 1.0 - 0.8 * gauss(tau[k], 20.0, sigma);
      bump[k] = 1.0 + 0.4 * gauss(tau[k], -30.0, sigma);
    }
    const DipStatistics d = dip_statistics(tau, rn);
    CHECK(d.center == doctest::Approx(20.0));
    CHECK(d.rho_peak == doctest::Approx(0.8));
    CHECK(d.visibility == doctest::Approx(0.8 / 1.2));
    CHECK(d.width == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma).epsilon(1e-4));
    const DipStatistics p = dip_statistics(tau, bump);
    CHECK(p.rho_peak == doctest::Approx(-0.4));
    CHECK(p.center == doctest::Approx(-30.0));
    CHECK(p.width == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma).epsilon(1e-4));
    // A deeper feature outside the central window is ignored.
    std::vector<double> edge = rn;
    for (std::size_t k = 0; k < tau.size(); ++k) edge[k] -= 0.15 * gauss(tau[k], 450.0, 5.0);
    CHECK(dip_statistics(tau, edge, 0.5).center == doctest::Approx(20.0));
    CHECK_THROWS_AS(dip_statistics(tau, rn, 0.0), ConfigError);
    const std::vector<double> flat(tau.size(), 1.0);
    CHECK(dip_statistics(tau, flat).width == 0.0);
  }

  TEST_CASE("FWHM uses the outermost half-maximum crossings") {
    CHECK(fwhm({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}) == doctest::Approx(1.0));
    const std::vector<double> x = linspace(-2.0, 12.0, 1401);
    std::vector<double> two(x.size()), g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      two[k] = std::max(0.0, 1.0 - 2.0 * std::abs(x[k])) + std::max(0.0, 1.0 - 2.0 * std::abs(x[k] - 10.0));
      g[k] = gauss(x[k], 5.0, 0.7);
    }
    CHECK(fwhm(x, two) == doctest::Approx(10.5));
    CHECK(fwhm(x, g) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * 0.7).epsilon(0.01));
    const auto [lo, hi] = half_max_bounds(x, g);
    CHECK(lo < 5.0);
    CHECK(hi > 5.0);
    CHECK_THROWS_AS(fwhm({1.0}, {}), ConfigError);
  }

  TEST_CASE("a phase-matched unit-index layer reaches the reference exactly") {
    // n = 1 everywhere and ω_p = ω_s + ω_i: the FF mismatch vanishes and the coupling is maximal.
    Stack s;
    s.layers.push_back(testing::layer(testing::constant_material("unit", 1.0), 2000.0, 7.0));
    const PumpSpec cw = PumpSpec::cw(664.5, 0.8);
    const double ws = 0.46 * cw.carrier_omega, wi = cw.carrier_omega - ws;
    const EfficiencyReport e = efficiency_at(s, cw, {}, ws, ReferenceWeight::signal_idler);
    CHECK(e.eta[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e.total > e.eta[0]);
    const EfficiencyReport w = efficiency_at(s, cw, {}, ws, ReferenceWeight::as_written);
    CHECK(w.eta[0] == doctest::Approx(wi / ws).epsilon(1e-10));

    const PumpSpec pulsed = PumpSpec::gaussian(664.5, 150.0, 0.4, 0.8);
    const EfficiencyReport ep = efficiency_at(s, pulsed, {}, ws, ReferenceWeight::signal_idler, 201, 6.0);
    CHECK(ep.eta[0] == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("efficiency is a ratio: independent of pump strength, nonlinearity scale and constants") {
    const Stack s = testing::bundled_stack();
    Stack strong = s;
    for (Layer& l : strong.layers) l.chi2 = l.chi2.scaled(4.0);
    PumpSpec cw = PumpSpec::cw(677.567);
    const EmissionGeometry g{deg_to_rad(13.5), 0.0, 0.0};
    const double ws = 0.5 * cw.carrier_omega;
    const EfficiencyReport a = efficiency_at(s, cw, g, ws);
    cw.amplitude = 5.0;
    const EfficiencyReport b = efficiency_at(strong, cw, g, ws);
    CHECK(b.total == doctest::Approx(a.total).epsilon(1e-12));

    const UniformGrid grid{ws, 0.0, 1};
    const CwJsa j = jsa_cw(s, cw, g, grid);
    const CwJsa r = reference_jsa_cw(s, cw, grid);
    PhysicalConstants k;
    k.hbar = 7.0;
    k.epsilon0 = 0.1;
    const EfficiencyReport c = relative_efficiency(energy_spectrum(j, k), energy_spectrum(r, k), 0);
    CHECK(c.total == doctest::Approx(a.total).epsilon(1e-12));
    double sum = 0.0;
    for (double v : c.eta) sum += v;
    CHECK(sum == doctest::Approx(c.total));
  }

  TEST_CASE("reference amplitude closed form and its failure mode") {
    const Stack s = testing::bundled_stack();
    const PumpSpec cw = PumpSpec::cw(677.567, 2.0);
    const UniformGrid grid = UniformGrid::span(1.2, 1.5, 4);
    const CwJsa r = reference_jsa_cw(s, cw, grid, ReferenceWeight::signal_idler);
    const double sum = 25 * 10.0 * 117.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double expected =
          std::sqrt(grid[k] * (cw.carrier_omega - grid[k])) * 2.0 * sum / (2.0 * std::sqrt(2.0 * kPi) * kSpeedOfLight);
      CHECK(std::abs(r.sheet(Channel::ff)[k]) == doctest::Approx(expected).epsilon(1e-14));
      CHECK(r.sheet(Channel::bb)[k] == cplx(0.0));
    }
    Stack linear = s;
    for (Layer& l : linear.layers) l.chi2 = {};
    CHECK_THROWS_AS(efficiency_at(linear, cw, {}, 0.5 * cw.carrier_omega), NumericalError);
    CHECK_THROWS_AS(reference_jsa(s, cw, grid, grid), ConfigError);
  }

  TEST_CASE("an all-zero amplitude gives zero everywhere without dividing by zero") {
    const UniformGrid g = UniformGrid::span(1.2, 1.4, 12);
    const JsaGrid j = synthetic(g, g, [](double, double) { return cplx(0.0); });
    for (double v : total_pairs(j)) CHECK(v == 0.0);
    const SpectrumResult s = energy_spectrum(j);
    CHECK(s.signal_stats[0].peak == 0.0);
    CHECK(s.signal_stats[0].fwhm_nm == 0.0);
    const TimeDomainTpa t = time_domain_tpa(j, Channel::ff);
    CHECK_FALSE(t.normalized);
    for (const cplx& v : t.amplitude) CHECK(v == cplx(0.0));
    const FluxResult f = photon_flux(j, UniformGrid::span(-100.0, 100.0, 11));
    for (double v : f.flux[0]) CHECK(v == 0.0);
    CHECK(f.stats[0].fwhm == 0.0);
    CHECK_THROWS_AS(hom_scan(j, Channel::ff, {0.0}), NumericalError);
  }
}
