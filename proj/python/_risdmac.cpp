#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "risdmac/commands.hpp"
#include "risdmac/errors.hpp"

namespace py = pybind11;
using namespace risdmac;

namespace {

std::string render(const Table& t, const std::string& format) {
  std::ostringstream out;
  write_table(t, parse_format(format), out);
  return out.str();
}

RunConfig config_from(const std::string& text, const std::vector<std::string>& overrides) {
  return load_config_text(text, overrides);
}

}  // namespace

PYBIND11_MODULE(_risdmac, m) {
  m.doc() = "Capacity regions and outage probabilities for a two-user RIS-assisted dirty MAC.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("lower_incomplete_gamma", &lower_incomplete_gamma, py::arg("s"), py::arg("x"));
  m.def("rate_to_threshold", [](double r) { return rate_to_threshold(r).value(); }, py::arg("rate"));

  py::enum_<TruncationPolicy>(m, "TruncationPolicy")
      .value("fixed", TruncationPolicy::fixed)
      .value("adaptive", TruncationPolicy::adaptive);

  py::class_<MixtureGammaParams>(m, "MixtureGammaParams")
      .def_readonly("m_elements", &MixtureGammaParams::m_elements)
      .def_readonly("lam", &MixtureGammaParams::lambda)
      .def_readonly("sigma", &MixtureGammaParams::sigma)
      .def_readonly("zeta", &MixtureGammaParams::zeta)
      .def_property_readonly("truncation", &MixtureGammaParams::truncation)
      .def_property_readonly("mass_deficit", &MixtureGammaParams::mass_deficit);

  m.def(
      "build_mixture_params",
      [](int m_elements, std::optional<int> terms) {
        MixtureOptions o;
        if (terms) {
          o.policy = TruncationPolicy::fixed;
          o.fixed_terms = *terms;
        }
        return build_mixture_params(m_elements, o);
      },
      py::arg("m_elements"), py::arg("terms") = py::none(),
      "Adaptive truncation unless `terms` fixes L.");
  m.def("pdf_H2_exact", &pdf_H2_exact, py::arg("x"), py::arg("params"));
  m.def("pdf_H2_mixture", &pdf_H2_mixture, py::arg("x"), py::arg("params"));

  py::class_<SnrDistribution>(m, "SnrDistribution")
      .def(py::init([](int m_elements, double direct, double ris) {
             return SnrDistribution(m_elements, AvgSnrPair{SnrLinear(direct), SnrLinear(ris)});
           }),
           py::arg("m_elements"), py::arg("direct"), py::arg("ris"))
      .def_property_readonly("m_elements", &SnrDistribution::m_elements)
      .def_property_readonly("omega", &SnrDistribution::omega)
      .def_property_readonly("mean", &SnrDistribution::mean)
      .def_property_readonly("clt_warning", &SnrDistribution::clt_warning)
      .def("scaled", &SnrDistribution::scaled, py::arg("factor"))
      .def("cdf", [](const SnrDistribution& d, double g) { return cdf_gamma_closed(SnrLinear(g), d).value(); })
      .def("cdf_quadrature",
           [](const SnrDistribution& d, double g) { return cdf_gamma_quadrature(SnrLinear(g), d).value(); })
      .def("pdf", [](const SnrDistribution& d, double g) { return pdf_gamma(SnrLinear(g), d); });

  m.def(
      "op_doubly",
      [](const SnrDistribution& a, const SnrDistribution& b, double rt) { return op_doubly_closed(a, b, rt).value(); },
      py::arg("d1"), py::arg("d2"), py::arg("rt"));
  m.def(
      "op_single",
      [](const SnrDistribution& a, const SnrDistribution& b, double rt, double r2, double rho) {
        OutageQuery q;
        q.model = MacModel::single;
        q.rt_single = rt;
        q.r2_single = r2;
        q.rho = rho;
        q.validate();
        return op_single_closed(a, b, q).value();
      },
      py::arg("d1"), py::arg("d2"), py::arg("rt"), py::arg("r2"), py::arg("rho"));

  m.def(
      "average_snrs",
      [](const std::string& config, const std::vector<std::string>& overrides) {
        const auto avg = average_snrs(config_from(config, overrides).scenario);
        std::vector<std::pair<double, double>> out;
        for (const auto& a : avg) out.emplace_back(a.direct.value(), a.ris.value());
        return out;
      },
      py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
      "(direct, ris) average SNR per user for an INI config text.");

  // Subcommands, returning the rendered table.
  auto command = [&m](const char* name, Table (*fn)(const RunConfig&)) {
    m.def(
        name,
        [fn](const std::string& config, const std::vector<std::string>& overrides, const std::string& format) {
          py::gil_scoped_release release;
          return render(fn(config_from(config, overrides)), format);
        },
        py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{}, py::arg("format") = "csv");
  };
  command("region", &cmd_region);
  command("outage", &cmd_outage);
  command("sweep", &cmd_sweep);
  command("dist_check", &cmd_dist_check);
  m.def(
      "validate",
      [](const std::string& config, const std::vector<std::string>& overrides) {
        ValidationReport report;
        {
          py::gil_scoped_release release;
          report = run_validation(config_from(config, overrides));
        }
        return py::make_tuple(report.all_pass(), render(validation_table(report), "csv"));
      },
      py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
      "(all_passed, csv report)");
}
