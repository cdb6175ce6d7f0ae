#include "pbg/spdc.hpp"

#include <algorithm>
#include <cmath>

#include "pbg/error.hpp"
#include "pbg/parallel.hpp"

namespace pbg {

namespace {

// Points whose pump spectral amplitude is below this fraction of the peak
// are left at zero (the Gaussian has long since underflowed any physics).
constexpr double kPumpCutoff = 1e-15;

constexpr std::size_t kTe = 0;
constexpr std::size_t kTm = 1;
constexpr std::size_t kForward = 0;
constexpr std::size_t kBackward = 1;

Vec3c polarization_vector(std::size_t pol, std::size_t dir, cplx sin_t, cplx cos_t) {
  if (pol == kTe) return {cplx{1.0}, cplx{0.0}, cplx{0.0}};
  return {cplx{0.0}, cos_t, dir == kForward ? -sin_t : sin_t};
}

cplx element(const TransferMatrix& m, std::size_t row, std::size_t col) {
  if (row == 0) return col == 0 ? m.m11 : m.m12;
  return col == 0 ? m.m21 : m.m22;
}

cplx directed(const FieldAmplitudes& a, std::size_t dir) { return dir == kForward ? a.forward : a.backward; }

// Which field slots (pump, signal, idler) can couple a TE or TM wave in any layer.
std::array<std::array<bool, 2>, 3> coupling_of(const Stack& stack) {
  std::array<std::array<bool, 2>, 3> c{};
  for (const Layer& layer : stack.layers) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int k = 0; k < 3; ++k) {
          if (layer.chi2.at(a, b, k) == 0.0) continue;
          c[0][a == 0 ? kTe : kTm] = true;
          c[1][b == 0 ? kTe : kTm] = true;
          c[2][k == 0 ? kTe : kTm] = true;
        }
  }
  return c;
}

bool exits_propagate(const AngleSet& a) { return a.propagating(0) && a.propagating(a.regions() - 1); }

}  // namespace

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::ff: return "FF";
    case Channel::fb: return "FB";
    case Channel::bf: return "BF";
    case Channel::bb: return "BB";
  }
  return "?";
}

std::optional<double> idler_angle(double omega_p, double omega_s, double omega_i, double theta_p, double theta_s) {
  if (!(omega_i > 0.0)) throw ConfigError("idler frequency must be positive");
  const double arg = (omega_p / omega_i) * std::sin(theta_p) - (omega_s / omega_i) * std::sin(theta_s);
  if (std::abs(arg) > 1.0) return std::nullopt;
  return std::asin(arg);
}

cplx sinc(cplx x) {
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

SpdcModel::SpdcModel(Stack stack, PumpSpec pump, EmissionGeometry geometry)
    : stack_(std::move(stack)), pump_(pump), geometry_(geometry) {
  stack_.validate();
  pump_.validate();
  if (!(std::abs(geometry_.theta_s) < kPi / 2)) throw ConfigError("signal angle must satisfy |theta_s| < 90 deg");
  pump_split_ = pump_polarization_split(pump_);
  signal_weights_ = {std::cos(geometry_.phi_s), -std::sin(geometry_.phi_s)};
  idler_weights_ = {std::cos(geometry_.phi_i), -std::sin(geometry_.phi_i)};
  for (std::size_t l = 1; l <= stack_.size(); ++l)
    if (!stack_.layers[l - 1].chi2.is_zero()) nonlinear_layers_.push_back(l);
  coupled_ = coupling_of(stack_);
}

SpdcModel::PumpSide SpdcModel::pump_side(double omega_p) const {
  PumpSide side;
  side.angles = snell_chain(stack_, omega_p, pump_.theta);
  const std::array<double, 2> weights{pump_split_.te, pump_split_.tm};
  const std::array<Polarization, 2> pols{Polarization::te, Polarization::tm};
  for (std::size_t p = 0; p < 2; ++p)
    if (coupled_[0][p] && weights[p] != 0.0) side.fields[p] = internal_field(stack_, side.angles, pols[p], 1.0);
  return side;
}

namespace {

SpdcModel::EmittedSide emitted(const Stack& stack, AngleSet angles, const std::array<bool, 2>& needed,
                               const std::array<double, 2>& weights) {
  SpdcModel::EmittedSide side;
  side.angles = std::move(angles);
  side.propagating = exits_propagate(side.angles);
  if (!side.propagating) return side;
  const std::array<Polarization, 2> pols{Polarization::te, Polarization::tm};
  for (std::size_t p = 0; p < 2; ++p)
    if (needed[p] && weights[p] != 0.0) side.exits[p] = exit_decomposition(stack, side.angles, pols[p]);
  return side;
}

}  // namespace

SpdcModel::EmittedSide SpdcModel::signal_side(double omega_s) const {
  return emitted(stack_, snell_chain(stack_, omega_s, geometry_.theta_s), coupled_[1], signal_weights_);
}

SpdcModel::EmittedSide SpdcModel::idler_side(double omega_p, double omega_s, double omega_i) const {
  if (!(omega_i > 0.0)) {
    EmittedSide side;
    side.propagating = false;
    return side;
  }
  // Transverse wave-vector conservation: ω_i n_i sin θ_i = ω_p n_p sin θ_p − ω_s n_s sin θ_s,
  // expressed through the ambient Snell invariants n sin θ.
  const auto ambient_index = [&](double omega) {
    return refractive_index(stack_.ambient_left, omega_to_wavelength(omega));
  };
  const double inv_p = ambient_index(omega_p) * std::sin(pump_.theta);
  const double inv_s = ambient_index(omega_s) * std::sin(geometry_.theta_s);
  const double inv_i = (omega_p * inv_p - omega_s * inv_s) / omega_i;
  return emitted(stack_, snell_chain_invariant(stack_, omega_i, cplx{inv_i, 0.0}), coupled_[2], idler_weights_);
}

ChannelAmplitudes SpdcModel::amplitude(const PumpSide& pump, const EmittedSide& signal, const EmittedSide& idler,
                                       cplx pump_amplitude) const {
  ChannelAmplitudes out{};
  if (!signal.propagating || !idler.propagating) return out;
  const std::array<double, 2> pump_weights{pump_split_.te, pump_split_.tm};

  for (const std::size_t l : nonlinear_layers_) {
    const Layer& layer = stack_.layers[l - 1];
    const double length = layer.thickness_nm;
    const cplx kp = pump.angles.kz[l], ks = signal.angles.kz[l], ki = idler.angles.kz[l];

    for (std::size_t pp = 0; pp < 2; ++pp) {
      if (pump.fields[pp].empty()) continue;
      for (std::size_t dp = 0; dp < 2; ++dp) {
        const cplx a_p = pump_weights[pp] * directed(pump.fields[pp][l], dp);
        if (a_p == 0.0) continue;
        const Vec3c e_p = polarization_vector(pp, dp, pump.angles.sin_theta[l], pump.angles.cos_theta[l]);
        const cplx k_p = dp == kForward ? kp : -kp;

        for (std::size_t ps = 0; ps < 2; ++ps) {
          if (signal.exits[ps].empty()) continue;
          const TransferMatrix& d_s = signal.exits[ps][l];
          for (std::size_t ds = 0; ds < 2; ++ds) {
            const Vec3c e_s = polarization_vector(ps, ds, signal.angles.sin_theta[l], signal.angles.cos_theta[l]);
            const cplx k_s = ds == kForward ? ks : -ks;

            for (std::size_t pi = 0; pi < 2; ++pi) {
              if (idler.exits[pi].empty()) continue;
              const TransferMatrix& d_i = idler.exits[pi][l];
              for (std::size_t di = 0; di < 2; ++di) {
                const Vec3c e_i = polarization_vector(pi, di, idler.angles.sin_theta[l], idler.angles.cos_theta[l]);
                const cplx coupling = layer.chi2.contract(e_p, e_s, e_i);
                if (coupling == 0.0) continue;
                const cplx k_i = di == kForward ? ki : -ki;
                const cplx half = 0.5 * (k_p - k_s - k_i) * length;
                const cplx term = coupling * a_p * length * std::exp(kI * half) * sinc(half) *
                                  signal_weights_[ps] * idler_weights_[pi];
                for (std::size_t ms = 0; ms < 2; ++ms) {
                  const cplx ws = std::conj(element(d_s, ds, ms));
                  for (std::size_t mi = 0; mi < 2; ++mi)
                    out[2 * ms + mi] += term * ws * std::conj(element(d_i, di, mi));
                }
              }
            }
          }
        }
      }
    }
  }

  const double omega_s = signal.angles.omega, omega_i = idler.angles.omega;
  const cplx prefactor = -kI * std::sqrt(omega_s * omega_i) / (2.0 * std::sqrt(2.0 * kPi) * kSpeedOfLight);
  for (cplx& v : out) v *= prefactor * pump_amplitude;
  return out;
}

ChannelAmplitudes SpdcModel::pulsed_amplitude(double omega_s, double omega_i) const {
  const double omega_p = omega_s + omega_i;
  return amplitude(pump_side(omega_p), signal_side(omega_s), idler_side(omega_p, omega_s, omega_i),
                   pump_spectrum(pump_, omega_p));
}

ChannelAmplitudes SpdcModel::cw_amplitude(double omega_s) const {
  const double omega_p = pump_.carrier_omega;
  return amplitude(pump_side(omega_p), signal_side(omega_s), idler_side(omega_p, omega_s, omega_p - omega_s),
                   pump_.amplitude);
}

UniformGrid default_signal_grid(const PumpSpec& pump, std::size_t points) {
  const double half = 0.5 * pump.carrier_omega;
  return UniformGrid::span(0.7 * half, 1.3 * half, points);
}

namespace {

void check_grid(const UniformGrid& g, const char* what) {
  if (g.size == 0) throw ConfigError(std::string(what) + " grid is empty");
  if (!(g.start > 0.0)) throw ConfigError(std::string(what) + " grid must contain positive frequencies only");
}

}  // namespace

JsaGrid jsa(const Stack& stack, const PumpSpec& pump, const EmissionGeometry& geometry, const UniformGrid& signal,
            const UniformGrid& idler, std::size_t workers) {
  if (pump.kind != PumpKind::gaussian) throw ConfigError("jsa needs a gaussian pump; use jsa_cw for a cw pump");
  check_grid(signal, "signal");
  check_grid(idler, "idler");
  const SpdcModel model(stack, pump, geometry);

  JsaGrid out;
  out.signal = signal;
  out.idler = idler;
  out.pump = pump;
  out.geometry = geometry;
  out.stack_hash = stack_hash(stack);
  for (auto& s : out.sheets) s.assign(signal.size * idler.size, cplx{0.0});

  const double peak = pump.amplitude * pump.duration_fs / std::sqrt(2.0 * std::abs(cplx{1.0, pump.chirp}));
  const auto active = [&](double omega_p) { return std::abs(pump_spectrum(pump, omega_p)) >= kPumpCutoff * peak; };

  // With equal steps ω_p depends on i_s + i_i only, so pump fields are shared along anti-diagonals.
  const bool shared = signal.size == 1 || idler.size == 1 ||
                      std::abs(signal.step - idler.step) <= 1e-12 * std::max(signal.step, idler.step);
  const double step = signal.size > 1 ? signal.step : idler.step;
  const auto omega_p_of = [&](std::size_t k) { return signal.start + idler.start + static_cast<double>(k) * step; };
  std::vector<std::optional<SpdcModel::PumpSide>> pump_cache;
  std::vector<char> pump_failed;
  if (shared) {
    const std::size_t sums = signal.size + idler.size - 1;
    pump_cache.resize(sums);
    pump_failed.assign(sums, 0);
    parallel_for(sums, workers, [&](std::size_t k) {
      const double omega_p = omega_p_of(k);
      if (!active(omega_p)) return;
      try {
        pump_cache[k] = model.pump_side(omega_p);
      } catch (const NumericalError&) {
        pump_failed[k] = 1;
      }
    });
  }

  std::vector<std::size_t> singular(signal.size, 0), forbidden(signal.size, 0);
  parallel_for(signal.size, workers, [&](std::size_t is) {
    const double omega_s = signal[is];
    std::optional<SpdcModel::EmittedSide> sig;
    bool signal_tried = false;
    for (std::size_t ii = 0; ii < idler.size; ++ii) {
      const double omega_i = idler[ii];
      const double omega_p = omega_s + omega_i;
      const SpdcModel::PumpSide* ps = nullptr;
      if (shared) {
        const std::size_t k = is + ii;
        if (pump_failed[k]) {
          ++singular[is];
          continue;
        }
        if (!pump_cache[k]) continue;
        ps = &*pump_cache[k];
      } else if (!active(omega_p)) {
        continue;
      }
      if (!signal_tried) {
        signal_tried = true;
        try {
          sig = model.signal_side(omega_s);
        } catch (const NumericalError&) {
        }
      }
      if (!sig) {
        ++singular[is];
        continue;
      }
      try {
        std::optional<SpdcModel::PumpSide> local;
        if (!ps) ps = &local.emplace(model.pump_side(omega_p));
        const SpdcModel::EmittedSide idl = model.idler_side(omega_p, omega_s, omega_i);
        if (!sig->propagating || !idl.propagating) {
          ++forbidden[is];
          continue;
        }
        const ChannelAmplitudes amp = model.amplitude(*ps, *sig, idl, pump_spectrum(pump, omega_p));
        for (std::size_t c = 0; c < 4; ++c) out.sheets[c][is * idler.size + ii] = amp[c];
      } catch (const NumericalError&) {
        ++singular[is];
      }
    }
  });
  for (std::size_t is = 0; is < signal.size; ++is) {
    out.singular_points += singular[is];
    out.forbidden_points += forbidden[is];
  }
  return out;
}

CwJsa jsa_cw(const Stack& stack, const PumpSpec& pump, const EmissionGeometry& geometry, const UniformGrid& signal,
             std::size_t workers) {
  if (pump.kind != PumpKind::cw) throw ConfigError("jsa_cw needs a cw pump");
  check_grid(signal, "signal");
  if (!(signal.back() < pump.carrier_omega))
    throw ConfigError("signal grid must stay below the pump frequency so the idler frequency is positive");
  const SpdcModel model(stack, pump, geometry);

  CwJsa out;
  out.signal = signal;
  out.pump = pump;
  out.geometry = geometry;
  out.stack_hash = stack_hash(stack);
  for (auto& s : out.sheets) s.assign(signal.size, cplx{0.0});

  const double omega_p = pump.carrier_omega;
  const SpdcModel::PumpSide ps = model.pump_side(omega_p);
  std::vector<char> status(signal.size, 0);  // 1 singular, 2 forbidden
  parallel_for(signal.size, workers, [&](std::size_t is) {
    const double omega_s = signal[is];
    try {
      const SpdcModel::EmittedSide sig = model.signal_side(omega_s);
      const SpdcModel::EmittedSide idl = model.idler_side(omega_p, omega_s, omega_p - omega_s);
      if (!sig.propagating || !idl.propagating) {
        status[is] = 2;
        return;
      }
      const ChannelAmplitudes amp = model.amplitude(ps, sig, idl, pump.amplitude);
      for (std::size_t c = 0; c < 4; ++c) out.sheets[c][is] = amp[c];
    } catch (const NumericalError&) {
      status[is] = 1;
    }
  });
  out.singular_points = static_cast<std::size_t>(std::count(status.begin(), status.end(), 1));
  out.forbidden_points = static_cast<std::size_t>(std::count(status.begin(), status.end(), 2));
  return out;
}

double pump_band_edge_ratio(const JsaGrid& grid) {
  const std::size_t ns = grid.signal.size, ni = grid.idler.size;
  const double w0 = grid.pump.carrier_omega;
  const double far = std::max(std::abs(grid.signal.start + grid.idler.start - w0),
                              std::abs(grid.signal.back() + grid.idler.back() - w0));
  double edge = 0.0, peak = 0.0;
  for (const auto& sheet : grid.sheets)
    for (std::size_t is = 0; is < ns; ++is)
      for (std::size_t ii = 0; ii < ni; ++ii) {
        const double v = std::abs(sheet[is * ni + ii]);
        peak = std::max(peak, v);
        if (std::abs(grid.signal[is] + grid.idler[ii] - w0) >= 0.9 * far) edge = std::max(edge, v);
      }
  return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace pbg
