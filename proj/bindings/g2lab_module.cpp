#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "g2lab/gamma.hpp"
#include "g2lab/model1d.hpp"
#include "g2lab/runner.hpp"
#include "g2lab/semigroup.hpp"
#include "g2lab/transport.hpp"

namespace py = pybind11;
using namespace g2lab;

namespace {

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int m = n > 0 ? static_cast<int>(rows[0].size()) : 0;
  Matrix out(n, m);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != m)
      throw Error(errc::size_mismatch, "ragged rate matrix");
    for (int j = 0; j < m; ++j) out(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  return out;
}

std::vector<std::vector<double>> matrix_to_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows(static_cast<size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) {
    rows[static_cast<size_t>(i)].resize(static_cast<size_t>(m.cols()));
    for (int j = 0; j < m.cols(); ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = m(i, j);
  }
  return rows;
}

py::object curvature_to_py(const CurvatureResult& r) {
  switch (r.kind) {
    case CurvatureKind::plus_infinity: return py::float_(std::numeric_limits<double>::infinity());
    case CurvatureKind::minus_infinity: return py::float_(-std::numeric_limits<double>::infinity());
    case CurvatureKind::finite: break;
  }
  return py::float_(r.value);
}

py::dict report_to_py(const CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["where"] = r.state_or_time;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["slack"] = r.slack;
  d["tolerance"] = r.tolerance;
  d["pass"] = r.pass;
  return d;
}

py::list reports_to_py(const std::vector<CheckReport>& rs) {
  py::list out;
  for (const auto& r : rs) out.append(report_to_py(r));
  return out;
}

} // namespace

PYBIND11_MODULE(_g2lab, m) {
  m.doc() = "curvature, heat-flow and transport verification lab";

  py::register_exception<Error>(m, "G2labError");

  py::class_<ReversibleGenerator>(m, "Generator")
      .def_property_readonly("n", &ReversibleGenerator::size)
      .def_property_readonly("measure",
                             [](const ReversibleGenerator& g) { return g.measure.weights; })
      .def_property_readonly("positions",
                             [](const ReversibleGenerator& g) {
                               return g.space.positions
                                          ? py::cast(*g.space.positions)
                                          : py::object(py::none());
                             })
      .def_property_readonly("rates",
                             [](const ReversibleGenerator& g) { return matrix_to_rows(g.rates); });

  py::class_<SpectralFactorization>(m, "SpectralFactorization")
      .def_property_readonly("eigenvalues",
                             [](const SpectralFactorization& f) { return f.eigenvalues; });

  m.def("build_chain",
        [](const std::vector<double>& measure, const std::vector<std::vector<double>>& rates,
           const std::optional<std::vector<double>>& positions) {
          StateSpace space = positions ? make_state_space(*positions)
                                       : make_state_space(static_cast<int>(measure.size()));
          return build_chain(std::move(space), make_measure(measure), matrix_from_rows(rates));
        },
        py::arg("measure"), py::arg("rates"), py::arg("positions") = py::none());

  m.def("build_weighted_grid",
        [](double a, double b, int n, const std::string& V) {
          return build_weighted_grid(a, b, n, parse_poly(V));
        },
        py::arg("a"), py::arg("b"), py::arg("n"), py::arg("V") = "0.5*x^2");

  m.def("apply", [](const ReversibleGenerator& g, const std::vector<double>& f) {
    return apply(g, Field(f)).values;
  });
  m.def("gamma", [](const ReversibleGenerator& g, const std::vector<double>& f,
                    const std::vector<double>& h) { return gamma(g, Field(f), Field(h)).values; });
  m.def("gamma2", [](const ReversibleGenerator& g, const std::vector<double>& f,
                     const std::vector<double>& h) { return gamma2(g, Field(f), Field(h)).values; });
  m.def("gamma2_weak", [](const ReversibleGenerator& g, const std::vector<double>& f,
                          const std::vector<double>& phi) {
    return gamma2_weak(g, Field(f), Field(phi));
  });
  m.def("h_operator",
        [](const ReversibleGenerator& g, const std::vector<double>& f,
           const std::vector<double>& a, const std::vector<double>& b) {
          return h_operator(g, Field(f), Field(a), Field(b)).values;
        });
  m.def("dirichlet_energy", [](const ReversibleGenerator& g, const std::vector<double>& f) {
    return dirichlet_energy(g, Field(f));
  });

  m.def("curvature_at",
        [](const ReversibleGenerator& g, int x) { return curvature_to_py(curvature_at(g, x)); });
  m.def("curvature_global",
        [](const ReversibleGenerator& g) { return curvature_to_py(curvature_global(g)); });
  m.def("curvature_interior",
        [](const ReversibleGenerator& g, double margin) {
          return curvature_to_py(curvature_interior(g, margin));
        },
        py::arg("generator"), py::arg("margin") = -1.0);

  m.def("factorize", &factorize);
  m.def("heat_apply", [](const SpectralFactorization& sf, const std::vector<double>& f, double t) {
    return heat_apply(sf, Field(f), t).values;
  });
  m.def("mollify", [](const SpectralFactorization& sf, const std::vector<double>& f, double eps) {
    return mollify(sf, Field(f), eps).values;
  });
  m.def("heat_flow_dirac",
        [](const SpectralFactorization& sf, int x, double t) {
          const DiscreteMeasure mu = heat_flow_dirac(sf, x, t);
          return py::make_tuple(mu.support, mu.weights);
        });
  m.def("gradient_estimate_report",
        [](const SpectralFactorization& sf, const ReversibleGenerator& g,
           const std::vector<double>& f, double K, const std::vector<double>& t_list,
           const std::vector<double>& alpha_list) {
          return reports_to_py(gradient_estimate_report(sf, g, Field(f), K, t_list, alpha_list));
        });

  m.def("wasserstein_1d",
        [](const std::vector<double>& xs, const std::vector<double>& ws,
           const std::vector<double>& ys, const std::vector<double>& vs, double p) {
          return wasserstein_1d(make_discrete_measure(xs, ws), make_discrete_measure(ys, vs), p);
        },
        py::arg("support_a"), py::arg("weights_a"), py::arg("support_b"), py::arg("weights_b"),
        py::arg("p"));
  m.def("transport_cost_lp",
        [](const std::vector<double>& xs, const std::vector<double>& ws,
           const std::vector<double>& ys, const std::vector<double>& vs, double p) {
          const DiscreteMeasure mu = make_discrete_measure(xs, ws);
          const DiscreteMeasure nu = make_discrete_measure(ys, vs);
          const LpResult lp =
              transport_cost_lp(mu, nu, CostFunction::power(p), distance_matrix_1d(mu, nu));
          py::list plan;
          for (const auto& e : lp.plan.entries) plan.append(py::make_tuple(e.i, e.j, e.mass));
          return py::make_tuple(lp.cost, plan);
        });
  m.def("entropy", [](const std::vector<double>& xs, const std::vector<double>& ws,
                      const std::vector<double>& m) {
    return entropy(make_discrete_measure(xs, ws), Measure{m});
  });

  m.def("model_gamma2", [](const std::string& V, const std::string& f) {
    return model_gamma2(parse_poly(V), parse_poly(f), parse_poly(f)).coefficients();
  });

  m.def("run_config", &run_config, py::arg("config_path"));
  m.def("emit_plots", &emit_plots, py::arg("report_path"));
}
