#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pbg/cli.hpp"
#include "pbg/error.hpp"
#include "pbg/io.hpp"
#include "pbg/observables.hpp"
#include "pbg/transfer.hpp"

namespace py = pybind11;
using namespace pbg;

namespace {

Polarization parse_pol(const std::string& s) {
  if (s == "TE" || s == "te") return Polarization::te;
  if (s == "TM" || s == "tm") return Polarization::tm;
  throw ConfigError("polarization must be \"TE\" or \"TM\"");
}

ReferenceWeight parse_weight(const std::string& s) {
  if (s == "as_written") return ReferenceWeight::as_written;
  if (s == "signal_idler") return ReferenceWeight::signal_idler;
  throw ConfigError("reference weight must be \"as_written\" or \"signal_idler\"");
}

EmissionGeometry geometry(double theta_deg, double phi_s_deg, double phi_i_deg) {
  return {deg_to_rad(theta_deg), deg_to_rad(phi_s_deg), deg_to_rad(phi_i_deg)};
}

UniformGrid signal_grid(const PumpSpec& pump, std::size_t points, std::pair<double, double> span) {
  const double half = 0.5 * pump.carrier_omega;
  return UniformGrid::span(span.first * half, span.second * half, points);
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<cplx> sheets_array(const std::array<std::vector<cplx>, 4>& sheets, std::vector<py::ssize_t> shape) {
  shape.insert(shape.begin(), 4);
  py::array_t<cplx> out(shape);
  cplx* dst = out.mutable_data();
  for (const auto& s : sheets) dst = std::copy(s.begin(), s.end(), dst);
  return out;
}

py::dict spectrum_dict(const SpectrumResult& r) {
  py::dict d;
  d["omega"] = to_array(r.signal_omega);
  std::vector<double> lambda(r.signal_omega.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) lambda[k] = omega_to_wavelength(r.signal_omega[k]);
  d["lambda_nm"] = to_array(lambda);
  py::dict channels, fwhm;
  for (Channel c : kChannels) {
    channels[py::str(std::string(channel_name(c)))] = to_array(r.signal[index(c)]);
    fwhm[py::str(std::string(channel_name(c)))] = r.signal_stats[index(c)].fwhm_nm;
  }
  d["signal"] = channels;
  d["fwhm_nm"] = fwhm;
  d["forward"] = to_array(r.signal_forward);
  d["backward"] = to_array(r.signal_backward);
  return d;
}

}  // namespace

PYBIND11_MODULE(_pbg_spdc, m) {
  m.doc() = "Photon-pair generation in layered nonlinear structures";
  m.attr("__version__") = PBG_VERSION;

  // Translators registered later are tried first, so the base class goes first.
  const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<NumericalError>(m, "NumericalError", base);
  py::register_exception<IoError>(m, "IoError", base);

  py::class_<Stack>(m, "Stack")
      .def_property_readonly("size", &Stack::size)
      .def_property_readonly("total_thickness_nm", [](const Stack& s) { return total_thickness(s); })
      .def_property_readonly("hash", [](const Stack& s) { return stack_hash(s); })
      .def_property_readonly("layers", [](const Stack& s) {
        py::list out;
        for (const Layer& l : s.layers) out.append(py::make_tuple(l.material.name, l.thickness_nm, l.chi2.max_abs()));
        return out;
      })
      .def("__repr__", [](const Stack& s) {
        std::ostringstream o;
        o << "<Stack " << s.size() << " layers, " << total_thickness(s) << " nm>";
        return o.str();
      });

  m.def("load_stack", [](const std::filesystem::path& stack, const std::filesystem::path& materials) {
    return load_stack(stack, load_materials(materials));
  }, py::arg("stack"), py::arg("materials"));

  py::class_<PumpSpec>(m, "Pump")
      .def_readonly("amplitude", &PumpSpec::amplitude)
      .def_readonly("duration_fs", &PumpSpec::duration_fs)
      .def_readonly("chirp", &PumpSpec::chirp)
      .def_readonly("carrier_omega", &PumpSpec::carrier_omega)
      .def_property_readonly("wavelength_nm", &PumpSpec::carrier_wavelength)
      .def_property_readonly("kind", [](const PumpSpec& p) { return p.kind == PumpKind::cw ? "cw" : "gaussian"; });
  m.def("cw_pump", [](double wl, double amplitude) { return PumpSpec::cw(wl, amplitude); }, py::arg("wavelength_nm"),
        py::arg("amplitude") = 1.0);
  m.def("gaussian_pump",
        [](double wl, double tau, double chirp, double amplitude) {
          PumpSpec p = PumpSpec::gaussian(wl, tau, chirp, amplitude);
          p.validate();
          return p;
        },
        py::arg("wavelength_nm"), py::arg("tau_fs"), py::arg("chirp") = 0.0, py::arg("amplitude") = 1.0);

  m.def("transmission",
        [](const Stack& s, double wavelength_nm, double theta_deg, const std::string& pol) {
          const auto p = power_coefficients(s, wavelength_to_omega(wavelength_nm), deg_to_rad(theta_deg), parse_pol(pol));
          return py::make_tuple(p.transmittance, p.reflectance);
        },
        py::arg("stack"), py::arg("wavelength_nm"), py::arg("theta_deg") = 0.0, py::arg("polarization") = "TE",
        "Energy transmittance and reflectance (T, R).");

  m.def("band_edge_resonance",
        [](const Stack& s, double lo, double hi, const std::string& pol, double theta_deg, double step) {
          return find_band_edge_resonance(s, parse_pol(pol), deg_to_rad(theta_deg), lo, hi, step);
        },
        py::arg("stack"), py::arg("lo_nm"), py::arg("hi_nm"), py::arg("polarization") = "TE",
        py::arg("theta_deg") = 0.0, py::arg("step_nm") = 0.01);

  m.def("jsa",
        [](const Stack& s, const PumpSpec& pump, double theta_deg, std::size_t points, std::pair<double, double> span,
           double phi_s_deg, double phi_i_deg, std::size_t workers) {
          const UniformGrid g = signal_grid(pump, points, span);
          const EmissionGeometry geo = geometry(theta_deg, phi_s_deg, phi_i_deg);
          py::dict d;
          d["signal_omega"] = to_array(g.values());
          if (pump.kind == PumpKind::cw) {
            const CwJsa j = [&] {
              py::gil_scoped_release release;
              return jsa_cw(s, pump, geo, g, workers);
            }();
            std::vector<double> idler(g.size);
            for (std::size_t k = 0; k < g.size; ++k) idler[k] = j.idler_omega(k);
            d["idler_omega"] = to_array(idler);
            d["sheets"] = sheets_array(j.sheets, {static_cast<py::ssize_t>(g.size)});
            d["forbidden_points"] = j.forbidden_points;
            return d;
          }
          const JsaGrid j = [&] {
            py::gil_scoped_release release;
            return pbg::jsa(s, pump, geo, g, g, workers);
          }();
          d["idler_omega"] = to_array(g.values());
          d["sheets"] = sheets_array(j.sheets, {static_cast<py::ssize_t>(g.size), static_cast<py::ssize_t>(g.size)});
          d["forbidden_points"] = j.forbidden_points;
          return d;
        },
        py::arg("stack"), py::arg("pump"), py::arg("theta_deg"), py::arg("points") = 256,
        py::arg("signal_span") = std::pair{0.7, 1.3}, py::arg("phi_s_deg") = 0.0, py::arg("phi_i_deg") = 0.0,
        py::arg("workers") = 0,
        "Joint spectral amplitude sheets in channel order FF, FB, BF, BB.");

  m.def("spectrum",
        [](const Stack& s, const PumpSpec& pump, double theta_deg, std::size_t points, std::pair<double, double> span,
           std::size_t workers) {
          const UniformGrid g = signal_grid(pump, points, span);
          const EmissionGeometry geo = geometry(theta_deg, 0.0, 0.0);
          SpectrumResult r;
          {
            py::gil_scoped_release release;
            r = pump.kind == PumpKind::cw ? energy_spectrum(jsa_cw(s, pump, geo, g, workers))
                                          : energy_spectrum(pbg::jsa(s, pump, geo, g, g, workers));
          }
          return spectrum_dict(r);
        },
        py::arg("stack"), py::arg("pump"), py::arg("theta_deg"), py::arg("points") = 513,
        py::arg("signal_span") = std::pair{0.7, 1.3}, py::arg("workers") = 0);

  m.def("hom",
        [](const Stack& s, const PumpSpec& pump, double theta_deg, const std::vector<double>& tau, std::size_t points,
           double window_fraction) {
          const UniformGrid g = signal_grid(pump, points, {0.7, 1.3});
          const EmissionGeometry geo = geometry(theta_deg, 0.0, 0.0);
          HomScan scan;
          {
            py::gil_scoped_release release;
            scan = pump.kind == PumpKind::cw ? hom_scan(jsa_cw(s, pump, geo, g), Channel::ff, tau, window_fraction)
                                             : hom_scan(pbg::jsa(s, pump, geo, g, g), Channel::ff, tau, window_fraction);
          }
          py::dict d;
          d["tau"] = to_array(scan.tau);
          d["rn"] = to_array(scan.rn);
          d["center"] = scan.dip.center;
          d["width"] = scan.dip.width;
          d["visibility"] = scan.dip.visibility;
          return d;
        },
        py::arg("stack"), py::arg("pump"), py::arg("theta_deg"), py::arg("tau_fs"), py::arg("points") = 513,
        py::arg("window_fraction") = 0.5, "FF-mode normalized coincidence rate R_n versus delay.");

  m.def("flux",
        [](const Stack& s, const PumpSpec& pump, double theta_deg, const std::vector<double>& tau_range,
           std::size_t points) {
          if (tau_range.size() != 3) throw ConfigError("tau range must be (start, stop, steps)");
          const UniformGrid g = signal_grid(pump, points, {0.7, 1.3});
          const UniformGrid tau = UniformGrid::span(tau_range[0], tau_range[1], static_cast<std::size_t>(tau_range[2]));
          FluxResult f;
          {
            py::gil_scoped_release release;
            f = photon_flux(pbg::jsa(s, pump, geometry(theta_deg, 0.0, 0.0), g, g), tau);
          }
          py::dict d, delay, width;
          d["tau"] = to_array(tau.values());
          for (Channel c : kChannels) {
            const std::string name(channel_name(c));
            d[py::str(name)] = to_array(f.flux[index(c)]);
            delay[py::str(name)] = f.stats[index(c)].delay;
            width[py::str(name)] = f.stats[index(c)].fwhm;
          }
          d["delay"] = delay;
          d["fwhm"] = width;
          return d;
        },
        py::arg("stack"), py::arg("pump"), py::arg("theta_deg"), py::arg("tau_fs") = std::vector<double>{-1500, 1500, 1501},
        py::arg("points") = 256);

  m.def("efficiency",
        [](const Stack& s, const PumpSpec& pump, double theta_deg, double omega_norm, const std::string& weight) {
          EfficiencyReport r;
          {
            py::gil_scoped_release release;
            r = efficiency_at(s, pump, geometry(theta_deg, 0.0, 0.0), 0.5 * omega_norm * pump.carrier_omega,
                              parse_weight(weight));
          }
          py::dict d;
          for (Channel c : kChannels) d[py::str(std::string(channel_name(c)))] = r.eta[index(c)];
          d["total"] = r.total;
          return d;
        },
        py::arg("stack"), py::arg("pump"), py::arg("theta_deg"), py::arg("omega_norm") = 1.0,
        py::arg("reference_weight") = "as_written", "Relative efficiency eta per channel at 2w_s/w_p = omega_norm.");

  m.def("read_jsa", [](const std::filesystem::path& path) {
    const JsaFile f = pbg::read_jsa(path);
    py::dict d;
    d["kind"] = f.kind == JsaFile::Kind::cw ? "cw" : "pulsed";
    d["signal_omega"] = to_array(f.signal.values());
    std::vector<double> idler(f.kind == JsaFile::Kind::cw ? f.signal.size : f.idler_size);
    for (std::size_t k = 0; k < idler.size(); ++k) idler[k] = f.idler_start + static_cast<double>(k) * f.idler_step;
    d["idler_omega"] = to_array(idler);
    d["pump_omega"] = f.pump_omega;
    d["stack_hash"] = f.stack_hash;
    std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(f.signal.size)};
    if (f.kind == JsaFile::Kind::pulsed) shape.push_back(static_cast<py::ssize_t>(f.idler_size));
    d["sheets"] = sheets_array(f.sheets, shape);
    return d;
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"pbg-spdc"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs a pbg-spdc subcommand; returns (exit_code, stdout, stderr).");
}
