#include "pbg/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include "pbg/config.hpp"
#include "pbg/error.hpp"
#include "pbg/hash.hpp"
#include "pbg/io.hpp"
#include "pbg/observables.hpp"
#include "pbg/parallel.hpp"

namespace pbg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Options {
  std::string config;
  std::size_t workers = 0;
  std::string output_dir;
  bool no_timestamp = false;
};

struct Context {
  RunConfig cfg;
  Options opt;
  std::size_t workers = 1;
  std::filesystem::path out_dir;
  std::ostream& out;

  Provenance provenance() const {
    Provenance p;
    p.stack_hash = stack_hash(cfg.stack);
    p.config_hash = cfg.config_hash;
    if (!opt.no_timestamp) p.timestamp = utc_timestamp();
    return p;
  }

  void write(const std::string& name, const CsvWriter& csv) const {
    const auto path = out_dir / name;
    write_atomic(path, csv.str());
    out << "wrote " << path.string() << " (" << csv.rows() << " rows)\n";
  }
};

std::string fmt(double v) { return format_double(v); }

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

/// Evaluates fn for every sweep angle and returns results in sweep order.
/// Many angles: parallel over angles, one worker inside. Few angles: serial
/// over angles, all workers inside. Results do not depend on the split.
template <class R>
std::vector<R> sweep(const Context& ctx, const std::function<R(double theta_deg, std::size_t inner)>& fn) {
  const std::vector<double> thetas = ctx.cfg.theta_s_deg.values();
  std::vector<R> results(thetas.size());
  if (thetas.size() >= 2 && ctx.workers > 1) {
    parallel_for(thetas.size(), ctx.workers, [&](std::size_t k) { results[k] = fn(thetas[k], 1); });
  } else {
    for (std::size_t k = 0; k < thetas.size(); ++k) results[k] = fn(thetas[k], ctx.workers);
  }
  return results;
}

bool is_cw(const Context& ctx) { return ctx.cfg.pump.kind == PumpKind::cw; }

std::vector<std::string> channel_columns(const std::string& prefix) {
  std::vector<std::string> cols;
  for (Channel c : kChannels) cols.push_back(prefix + std::string(channel_name(c)));
  return cols;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

int cmd_validate(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  std::size_t nonlinear = 0;
  for (const Layer& l : c.stack.layers) nonlinear += l.chi2.is_zero() ? 0 : 1;
  ctx.out << "config: " << c.source.string() << " (hash " << hex64(c.config_hash) << ")\n";
  ctx.out << "stack: N=" << c.stack.size() << ", total " << fmt(total_thickness(c.stack)) << " nm, " << nonlinear
          << " nonlinear layers, ambients " << c.stack.ambient_left.name << " | " << c.stack.ambient_right.name
          << ", hash " << hex64(stack_hash(c.stack)) << "\n";
  ctx.out << "pump: " << (is_cw(ctx) ? "cw" : "gaussian") << " at " << fixed(c.pump.carrier_wavelength(), 3) << " nm";
  if (c.resonance) ctx.out << " (resonance in " << fmt(c.resonance->lo_nm) << "-" << fmt(c.resonance->hi_nm) << " nm)";
  if (!is_cw(ctx)) ctx.out << ", tau " << fmt(c.pump.duration_fs) << " fs, chirp " << fmt(c.pump.chirp);
  ctx.out << ", theta_p " << fmt(rad_to_deg(c.pump.theta)) << " deg\n";
  const auto thetas = c.theta_s_deg.values();
  ctx.out << "geometry: " << thetas.size() << " signal angle(s)";
  if (!thetas.empty()) ctx.out << " from " << fmt(thetas.front()) << " to " << fmt(thetas.back()) << " deg";
  ctx.out << "\n";
  const UniformGrid g = c.signal_grid();
  ctx.out << "grid: " << g.size << " signal points, " << fixed(omega_to_wavelength(g.back()), 1) << "-"
          << fixed(omega_to_wavelength(g.start), 1) << " nm\n";
  return 0;
}

int cmd_transmission(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const std::vector<double> thetas = c.theta_s_deg.values();
  const std::vector<double> norms = c.grid.omega_norm.values();
  const double unit = c.grid.omega_norm_double ? 0.5 * c.pump.carrier_omega : c.pump.carrier_omega;
  std::vector<PowerCoefficients> values(thetas.size() * norms.size());
  parallel_for(values.size(), ctx.workers, [&](std::size_t k) {
    const double theta = deg_to_rad(thetas[k / norms.size()]);
    values[k] = power_coefficients(c.stack, norms[k % norms.size()] * unit, theta, c.transmission_polarization);
  });
  CsvWriter csv(ctx.provenance(), {"omega_norm", "theta_deg", "T", "R"});
  csv.comment(std::string("polarization=") + (c.transmission_polarization == Polarization::te ? "TE" : "TM") +
              " omega_norm=" + (c.grid.omega_norm_double ? "2w/wp" : "w/wp") +
              " wp_nm=" + fmt(c.pump.carrier_wavelength()));
  for (std::size_t k = 0; k < values.size(); ++k)
    csv.row({norms[k % norms.size()], thetas[k / norms.size()], values[k].transmittance, values[k].reflectance});
  ctx.write("transmission.csv", csv);
  if (c.resonance) ctx.out << "resonance_nm=" << fmt(c.pump.carrier_wavelength()) << "\n";
  return 0;
}

struct Computed {
  std::optional<JsaGrid> pulsed;
  std::optional<CwJsa> cw;
};

Computed compute_jsa(const Context& ctx, double theta_deg, std::size_t inner) {
  const RunConfig& c = ctx.cfg;
  Computed r;
  if (is_cw(ctx))
    r.cw = jsa_cw(c.stack, c.pump, c.geometry(theta_deg), c.signal_grid(), inner);
  else
    r.pulsed = jsa(c.stack, c.pump, c.geometry(theta_deg), c.signal_grid(), c.idler_grid(), inner);
  return r;
}

std::string index_name(const std::string& stem, std::size_t k, const std::string& ext) {
  std::ostringstream s;
  s << stem << '_' << std::setw(3) << std::setfill('0') << k << ext;
  return s.str();
}

int cmd_jsa(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const auto thetas = c.theta_s_deg.values();
  CsvWriter csv(ctx.provenance(), concat({"theta_deg", "omega_norm", "lambda_nm"}, channel_columns("N_")));
  csv.comment(is_cw(ctx) ? "N = |phi(w_s)|^2 (cw, w_i = w_p - w_s)" : "N = integral dw_i |phi(w_s, w_i)|^2");
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    // One angle at a time: full grids can be large.
    const Computed r = compute_jsa(ctx, thetas[k], ctx.workers);
    const auto name = index_name("jsa", k, ".bin");
    const double half = 0.5 * c.pump.carrier_omega;
    if (r.cw) {
      write_atomic(ctx.out_dir / name, encode_jsa(*r.cw));
      for (std::size_t is = 0; is < r.cw->signal.size; ++is) {
        std::vector<double> row{thetas[k], r.cw->signal[is] / half, omega_to_wavelength(r.cw->signal[is])};
        for (const auto& sheet : r.cw->sheets) row.push_back(std::norm(sheet[is]));
        csv.row(row);
      }
      csv.stats({{"theta_deg", fmt(thetas[k])}, {"file", name}, {"singular", std::to_string(r.cw->singular_points)},
                 {"forbidden", std::to_string(r.cw->forbidden_points)}});
    } else {
      const JsaGrid& j = *r.pulsed;
      write_atomic(ctx.out_dir / name, encode_jsa(j));
      for (std::size_t is = 0; is < j.signal.size; ++is) {
        std::vector<double> row{thetas[k], j.signal[is] / half, omega_to_wavelength(j.signal[is])};
        for (Channel ch : kChannels) row.push_back(marginal_signal_number(j, ch, is, 1.0));
        csv.row(row);
      }
      csv.stats({{"theta_deg", fmt(thetas[k])}, {"file", name}, {"singular", std::to_string(j.singular_points)},
                 {"forbidden", std::to_string(j.forbidden_points)},
                 {"pump_band_edge_ratio", fmt(pump_band_edge_ratio(j))}});
    }
    ctx.out << "wrote " << (ctx.out_dir / name).string() << "\n";
  }
  ctx.write("jsa_marginals.csv", csv);
  return 0;
}

int cmd_spectrum(Context& ctx) {
  const auto thetas = ctx.cfg.theta_s_deg.values();
  const auto spectra = sweep<SpectrumResult>(ctx, [&](double theta, std::size_t inner) {
    const Computed r = compute_jsa(ctx, theta, inner);
    return r.cw ? energy_spectrum(*r.cw) : energy_spectrum(*r.pulsed);
  });
  CsvWriter csv(ctx.provenance(), concat(concat({"theta_deg", "lambda_nm"}, channel_columns("S_")), {"S_sF", "S_sB"}));
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const SpectrumResult& s = spectra[k];
    for (std::size_t is = 0; is < s.signal_omega.size(); ++is) {
      std::vector<double> row{thetas[k], omega_to_wavelength(s.signal_omega[is])};
      for (const auto& ch : s.signal) row.push_back(ch[is]);
      row.push_back(s.signal_forward[is]);
      row.push_back(s.signal_backward[is]);
      csv.row(row);
    }
    std::vector<std::pair<std::string, std::string>> st{{"theta_deg", fmt(thetas[k])}};
    for (Channel ch : kChannels) {
      const CurveStats& cs = s.signal_stats[index(ch)];
      const std::string n(channel_name(ch));
      st.emplace_back("fwhm_nm_" + n, fmt(cs.fwhm_nm));
      st.emplace_back("peak_lambda_nm_" + n, fmt(cs.peak > 0 ? omega_to_wavelength(cs.peak_omega) : kNan));
    }
    st.emplace_back("fwhm_nm_sF", fmt(s.signal_forward_stats.fwhm_nm));
    st.emplace_back("fwhm_nm_sB", fmt(s.signal_backward_stats.fwhm_nm));
    csv.stats(st);
  }
  ctx.write("spectrum.csv", csv);
  return 0;
}

int cmd_time_map(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const auto thetas = c.theta_s_deg.values();
  const double window = c.grid.time_window_fs;
  const TpaOptions topt{c.grid.padding, true};
  if (is_cw(ctx)) {
    const auto maps = sweep<std::array<TimeDomainTpa, 4>>(ctx, [&](double theta, std::size_t inner) {
      const Computed r = compute_jsa(ctx, theta, inner);
      std::array<TimeDomainTpa, 4> out;
      for (Channel ch : kChannels) out[index(ch)] = time_domain_tpa(*r.cw, ch, topt);
      return out;
    });
    CsvWriter csv(ctx.provenance(), concat({"theta_deg", "tau_fs"}, channel_columns("A2_")));
    csv.comment("cw: |A|^2 versus tau = tau_s - tau_i, each channel normalized to unit integral");
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      const auto& m = maps[k];
      for (std::size_t t = 0; t < m[0].tau_s.size; ++t) {
        if (std::abs(m[0].tau_s[t]) > window) continue;
        std::vector<double> row{thetas[k], m[0].tau_s[t]};
        for (const auto& ch : m) row.push_back(std::norm(ch.amplitude[t]));
        csv.row(row);
      }
    }
    ctx.write("time_map.csv", csv);
    return 0;
  }
  CsvWriter csv(ctx.provenance(), concat({"theta_deg", "tau_s_fs", "tau_i_fs"}, channel_columns("A2_")));
  csv.comment("|A(tau_s, tau_i)|^2 per channel, each normalized to unit integral");
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const Computed r = compute_jsa(ctx, thetas[k], ctx.workers);
    std::array<TimeDomainTpa, 4> m;
    for (Channel ch : kChannels) m[index(ch)] = time_domain_tpa(*r.pulsed, ch, topt);
    const TimeDomainTpa& a = m[0];
    for (std::size_t ks = 0; ks < a.tau_s.size; ++ks) {
      if (std::abs(a.tau_s[ks]) > window) continue;
      for (std::size_t ki = 0; ki < a.tau_i.size; ++ki) {
        if (std::abs(a.tau_i[ki]) > window) continue;
        std::vector<double> row{thetas[k], a.tau_s[ks], a.tau_i[ki]};
        for (const auto& ch : m) row.push_back(std::norm(ch.at(ks, ki)));
        csv.row(row);
      }
    }
  }
  ctx.write("time_map.csv", csv);
  return 0;
}

int cmd_flux(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (is_cw(ctx)) throw ConfigError("flux needs a gaussian pump (a cw flux is constant in time)");
  const auto taus = c.grid.tau_fs.values();
  if (taus.empty()) throw ConfigError("$.grid.tau_fs: flux needs at least one time point");
  const UniformGrid tau = taus.size() == 1 ? UniformGrid{taus[0], 0.0, 1}
                                           : UniformGrid{taus[0], (taus.back() - taus[0]) / double(taus.size() - 1),
                                                         taus.size()};
  const auto thetas = c.theta_s_deg.values();
  CsvWriter csv(ctx.provenance(), concat({"theta_deg", "tau_fs"}, channel_columns("flux_")));
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const Computed r = compute_jsa(ctx, thetas[k], ctx.workers);
    const FluxResult f = photon_flux(*r.pulsed, tau, {}, c.flux_method, ctx.workers);
    for (std::size_t t = 0; t < tau.size; ++t) {
      std::vector<double> row{thetas[k], tau[t]};
      for (const auto& ch : f.flux) row.push_back(ch[t]);
      csv.row(row);
    }
    std::vector<std::pair<std::string, std::string>> st{{"theta_deg", fmt(thetas[k])}};
    for (Channel ch : kChannels) {
      const auto& s = f.stats[index(ch)];
      st.emplace_back("delay_fs_" + std::string(channel_name(ch)), fmt(s.delay));
      st.emplace_back("fwhm_fs_" + std::string(channel_name(ch)), fmt(s.fwhm));
    }
    csv.stats(st);
  }
  ctx.write("flux.csv", csv);
  return 0;
}

int cmd_hom(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const auto taus = c.grid.tau_fs.values();
  const auto thetas = c.theta_s_deg.values();
  const auto scans = sweep<std::array<HomScan, 4>>(ctx, [&](double theta, std::size_t inner) {
    const Computed r = compute_jsa(ctx, theta, inner);
    std::array<HomScan, 4> out;
    for (Channel ch : kChannels) {
      try {
        out[index(ch)] = r.cw ? hom_scan(*r.cw, ch, taus, c.hom_window_fraction)
                              : hom_scan(*r.pulsed, ch, taus, c.hom_window_fraction);
      } catch (const NumericalError&) {
        // Channel carries no amplitude: no interference to report.
        HomScan empty;
        empty.tau = taus;
        empty.rn.assign(taus.size(), kNan);
        empty.dip = {kNan, kNan, kNan, kNan};
        out[index(ch)] = empty;
      }
    }
    return out;
  });
  CsvWriter csv(ctx.provenance(), concat({"theta_deg", "tau_fs"}, channel_columns("Rn_")));
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    for (std::size_t t = 0; t < taus.size(); ++t) {
      std::vector<double> row{thetas[k], taus[t]};
      for (const auto& s : scans[k]) row.push_back(s.rn[t]);
      csv.row(row);
    }
    for (Channel ch : kChannels) {
      const DipStatistics& d = scans[k][index(ch)].dip;
      csv.stats({{"theta_deg", fmt(thetas[k])}, {"channel", std::string(channel_name(ch))},
                 {"center_fs", fmt(d.center)}, {"width_fs", fmt(d.width)}, {"rho_peak", fmt(d.rho_peak)},
                 {"visibility", fmt(d.visibility)}});
    }
  }
  ctx.write("hom.csv", csv);
  return 0;
}

int cmd_efficiency(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double omega_s = 0.5 * c.efficiency_omega_norm * c.pump.carrier_omega;
  const auto thetas = c.theta_s_deg.values();
  const auto reports = sweep<EfficiencyReport>(ctx, [&](double theta, std::size_t) {
    return efficiency_at(c.stack, c.pump, c.geometry(theta), omega_s, c.reference_weight);
  });
  CsvWriter csv(ctx.provenance(), concat(concat({"theta_deg"}, channel_columns("eta_")), {"eta_total"}));
  csv.comment("omega_norm=" + fmt(c.efficiency_omega_norm) + " reference_weight=" +
              (c.reference_weight == ReferenceWeight::as_written ? "as_written" : "signal_idler"));
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    std::vector<double> row{thetas[k]};
    for (double e : reports[k].eta) row.push_back(e);
    row.push_back(reports[k].total);
    csv.row(row);
  }
  ctx.write("efficiency.csv", csv);
  return 0;
}

void report(std::ostream& err, const char* kind, int code, const std::string& message) {
  std::string flat = message;
  for (char& ch : flat)
    if (ch == '\n' || ch == '\r') ch = ' ';
  err << "error kind=" << kind << " exit=" << code << " message=" << std::quoted(flat) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-pair generation in layered nonlinear structures", "pbg-spdc"};
  app.set_version_flag("--version", PBG_VERSION);
  app.require_subcommand(1);

  Options opt;
  using Handler = int (*)(Context&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands{
      {"validate", "Check a run config and print a summary of the stack", cmd_validate},
      {"transmission", "Transmittance/reflectance versus normalized frequency and angle", cmd_transmission},
      {"jsa", "Joint spectral amplitude: binary grid per angle plus marginals CSV", cmd_jsa},
      {"spectrum", "Signal energy spectra per exit channel", cmd_spectrum},
      {"time-map", "Two-photon amplitude |A(tau_s, tau_i)|^2", cmd_time_map},
      {"flux", "Signal photon flux versus time (gaussian pump)", cmd_flux},
      {"hom", "Hong-Ou-Mandel coincidence rate R_n versus delay", cmd_hom},
      {"efficiency", "Pair generation rate relative to the ideal reference structure", cmd_efficiency},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, help, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", opt.config, "Run configuration (JSON)")->required();
    sub->add_option("-w,--workers", opt.workers, "Worker threads (default: PBG_SPDC_WORKERS or all cores)");
    sub->add_option("-o,--output-dir", opt.output_dir, "Override the output directory of the config");
    sub->add_flag("--no-timestamp", opt.no_timestamp, "Omit the generation time from CSV headers");
    subs.emplace_back(sub, handler);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    report(err, "usage", 2, e.what());
    return 2;
  }

  try {
    for (const auto& [sub, handler] : subs) {
      if (!sub->parsed()) continue;
      Context ctx{load_run_config(opt.config), opt, 1, {}, out};
      ctx.workers = opt.workers ? opt.workers : default_workers();
      ctx.out_dir = opt.output_dir.empty() ? ctx.cfg.output_dir : std::filesystem::path(opt.output_dir);
      return handler(ctx);
    }
    return 2;
  } catch (const Error& e) {
    report(err, e.kind(), e.exit_code(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    report(err, "internal", 1, e.what());
    return 1;
  }
}

}  // namespace pbg
