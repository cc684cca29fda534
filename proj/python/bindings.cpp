#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resbasis/basis.hpp"
#include "resbasis/candidates.hpp"
#include "resbasis/errors.hpp"
#include "resbasis/fitting.hpp"
#include "resbasis/io.hpp"

namespace py = pybind11;
using namespace resbasis;

namespace {

QuadratureSpec quadrature_for(const std::string& norm_weight) {
  QuadratureSpec q;
  q.weight = parse_norm_weight(norm_weight);
  return q;
}

SolverOptions options_for(const std::string& norm_weight) {
  SolverOptions o;
  o.quadrature = quadrature_for(norm_weight);
  return o;
}

py::dict mode_dict(const BasisMode& m, const QuadratureSpec& q) {
  return py::module_::import("json").attr("loads")(mode_record(m, q).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spherically symmetric residual-stress bases on a shell";

  static py::exception<Error> error(m, "ResbasisError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kInvalidArgument || e.kind() == ErrorKind::kDomain) {
        PyErr_SetString(PyExc_ValueError, e.what());
      } else {
        error(e.what());
      }
    }
  });

  py::class_<ShellGeometry>(m, "ShellGeometry")
      .def(py::init<double, double>(), py::arg("r_inner") = 0.5, py::arg("r_outer") = 1.0)
      .def_readonly("r_inner", &ShellGeometry::r_inner)
      .def_readonly("r_outer", &ShellGeometry::r_outer);

  py::class_<FunctionalParams>(m, "FunctionalParams")
      .def(py::init([](double p, double k) { return FunctionalParams{p, k}; }), py::arg("p") = 0.0,
           py::arg("k") = 0.0)
      .def_static("from_beta_gamma", &FunctionalParams::from_beta_gamma)
      .def_readonly("p", &FunctionalParams::p)
      .def_readonly("k", &FunctionalParams::k)
      .def_property_readonly("beta", &FunctionalParams::beta)
      .def_property_readonly("gamma", &FunctionalParams::gamma);

  py::class_<ModeConstants>(m, "ModeConstants")
      .def_readonly("index_n", &ModeConstants::index_n)
      .def_readonly("omega", &ModeConstants::omega)
      .def_readonly("c", &ModeConstants::c)
      .def_property_readonly("lambda_", &ModeConstants::lambda)
      .def("__repr__", [](const ModeConstants& c) {
        return "ModeConstants(n=" + std::to_string(c.index_n) + ", omega=" + std::to_string(c.omega) + ")";
      });

  m.def("strip_violation", &strip_violation, py::arg("params"), py::arg("strict") = false);

  m.def(
      "solve_modes",
      [](int count, const FunctionalParams& params, const ShellGeometry& geometry) {
        std::vector<ModeConstants> out;
        for (const auto& mode : solve_modes(count, params, geometry, SolverOptions{})) {
          out.push_back(mode.constants);
        }
        return out;
      },
      py::arg("count"), py::arg("params") = FunctionalParams{}, py::arg("geometry") = ShellGeometry{});

  m.def(
      "mode_records",
      [](int count, const FunctionalParams& params, const ShellGeometry& geometry,
         const std::string& norm_weight) {
        const SolverOptions o = options_for(norm_weight);
        py::list out;
        for (const auto& mode : solve_modes(count, params, geometry, o)) {
          out.append(mode_dict(mode, o.quadrature));
        }
        return out;
      },
      py::arg("count"), py::arg("params") = FunctionalParams{}, py::arg("geometry") = ShellGeometry{},
      py::arg("norm_weight") = "r2");

  m.def(
      "solve_p0",
      [](int n, const ShellGeometry& geometry) { return solve_p0(n, geometry, SolverOptions{}); },
      py::arg("n"), py::arg("geometry") = ShellGeometry{});

  m.def(
      "continue_in_p",
      [](const ModeConstants& start, double p_target, const ShellGeometry& geometry) {
        return continue_in_p(start, p_target, geometry, SolverOptions{});
      },
      py::arg("start"), py::arg("p_target"), py::arg("geometry") = ShellGeometry{});

  m.def(
      "eval_mode",
      [](const ModeConstants& c, const FunctionalParams& params, double r, const ShellGeometry& g) {
        const StressPair s = eval_mode(c, params, g, r);
        return py::make_tuple(s.par, s.perp);
      },
      py::arg("constants"), py::arg("params"), py::arg("r"), py::arg("geometry") = ShellGeometry{});

  m.def(
      "eval_mu",
      [](const ModeConstants& c, const FunctionalParams& params, double r, const ShellGeometry& g) {
        return eval_mu(c, params, g, r);
      },
      py::arg("constants"), py::arg("params"), py::arg("r"), py::arg("geometry") = ShellGeometry{});

  m.def(
      "shrinkfit_pressure",
      [](double kappa, double mu, double r_m, double delta, const ShellGeometry& g) {
        return shrinkfit_pressure({kappa, mu, r_m, delta, g});
      },
      py::arg("kappa") = 3.0, py::arg("mu") = 1.0, py::arg("r_m") = 0.75, py::arg("delta") = 0.01,
      py::arg("geometry") = ShellGeometry{});

  m.def(
      "fit",
      [](const std::string& field, int n_max, const FunctionalParams& params,
         const ShellGeometry& g, const std::string& norm_weight) {
        RadialField target = field == "thermoelastic"
                                 ? thermoelastic_field(ThermoelasticSpec{.geometry = g})
                             : field == "shrinkfit"
                                 ? shrinkfit_field(ShrinkFitSpec{.geometry = g})
                                 : throw Error(ErrorKind::kInvalidArgument,
                                               "field must be 'thermoelastic' or 'shrinkfit'");
        const SolverOptions o = options_for(norm_weight);
        const auto modes = solve_modes(n_max, params, g, o);
        const FitReport rep = fit(target, modes, o.quadrature);
        return py::module_::import("json").attr("loads")(fit_report_json(rep).dump());
      },
      py::arg("field"), py::arg("n_max") = 100, py::arg("params") = FunctionalParams{},
      py::arg("geometry") = ShellGeometry{}, py::arg("norm_weight") = "r2");

  m.def(
      "decay_slope",
      [](const std::vector<double>& series, int lo, int hi) { return decay_slope(series, lo, hi); },
      py::arg("series"), py::arg("lo"), py::arg("hi"));
}
