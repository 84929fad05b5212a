#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "segrega/certification.hpp"
#include "segrega/config.hpp"
#include "segrega/error.hpp"
#include "segrega/harmonic_field.hpp"
#include "segrega/io.hpp"
#include "segrega/nodal_partition.hpp"
#include "segrega/pde_solver.hpp"

namespace py = pybind11;
using namespace segrega;

namespace {

// Reports cross the boundary as JSON text; the Python side turns them into dicts.
std::string text(const Json& j) { return dump_json(j, -1); }

Json two_s_json(const TwoSPointResult& r) {
  return {{"is_2s_point", r.is_2s_point}, {"a_s", r.a_s},   {"b_s", r.b_s}, {"leading_nonzero", r.leading_nonzero},
          {"equivalent", r.equivalent},   {"moments", moments_to_json(r.moments)}};
}

// Partition summary with the checks that do not throw on failure.
Json partition_summary(const NodalPartition& p) {
  Json out = {{"partition", partition_to_json(p)}};
  const auto g = build_graph(p);
  out["graph"] = {{"n", g.n}, {"m", g.m_edges}, {"f", g.f}, {"euler", g.euler()}, {"tree", g.tree}};
  const auto id = verify_multiplicity_identity(p);
  out["identity"] = {{"sum_index", id.sum_index}, {"expected", id.expected}, {"holds", id.holds},
                     {"arcs", id.arcs},           {"expected_arcs", id.expected_arcs}, {"multiset", id.multiset}};
  if (p.k == 6) {
    try {
      out["class"] = std::string(to_string(classify_k6(p)));
    } catch (const Error&) {
      out["class"] = nullptr;
    }
  }
  return out;
}

py::array_t<double> state_array(const DensityGrid& s) {
  py::array_t<double> a({s.grid.n_r(), s.grid.n_theta(), s.k});
  std::copy(s.values.begin(), s.values.end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of segrega";
  m.attr("__version__") = std::string(kVersion);

  static py::exception<Error> error(m, "SegregaError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<AdmissibleDatum>(m, "Datum")
      .def_static("from_json", [](const std::string& s) { return datum_from_json(parse_json(s)); })
      .def_static(
          "symmetric", [](int k, double phase, double amplitude) { return AdmissibleDatum::symmetric(k, phase, amplitude); },
          py::arg("k"), py::arg("phase") = 0.0, py::arg("amplitude") = 1.0)
      .def_static(
          "cosine_mode", [](int s, double amplitude) { return AlternatingDatum::cosine_mode(s, amplitude).base(); },
          py::arg("s"), py::arg("amplitude") = 1.0)
      .def_property_readonly("k", &AdmissibleDatum::k)
      .def_property_readonly("zeros", &AdmissibleDatum::zeros)
      .def_property_readonly("max_amplitude", &AdmissibleDatum::max_amplitude)
      .def("species", &AdmissibleDatum::species, py::arg("i"), py::arg("theta"))
      .def(
          "alternating", [](const AdmissibleDatum& d, double t) { return eval_alternating(d, t); }, py::arg("theta"))
      .def("to_json", [](const AdmissibleDatum& d) { return text(datum_to_json(d)); });

  py::class_<FourierField>(m, "Field")
      .def_property_readonly("truncation", &FourierField::truncation)
      .def_property_readonly("A", &FourierField::A)
      .def_property_readonly("B", &FourierField::B)
      .def("eval", [](const FourierField& f, double x, double y) { return f.eval(DiskPoint(x, y)); })
      .def("gradient",
           [](const FourierField& f, double x, double y) {
             const auto g = f.gradient(DiskPoint(x, y));
             return std::pair{g.x1, g.x2};
           })
      .def("hessian", [](const FourierField& f, double x, double y) {
        const auto h = f.hessian(DiskPoint(x, y));
        return std::tuple{h.h11, h.h12, h.h22};
      });

  m.def(
      "harmonic",
      [](const AdmissibleDatum& d, int truncation, int nodes) {
        return solve_dirichlet(AlternatingDatum(d), truncation, QuadratureRule(static_cast<std::size_t>(nodes)));
      },
      py::arg("datum"), py::arg("truncation") = kDefaultTruncation,
      py::arg("nodes") = static_cast<int>(QuadratureRule::kDefaultNodes));

  m.def(
      "critical_points",
      [](const FourierField& f, int s, unsigned threads) {
        CriticalSearchOptions opt;
        opt.threads = threads;
        return text(critical_points_to_json(find_zero_critical_points(f, s, opt)));
      },
      py::arg("field"), py::arg("s"), py::arg("threads") = 1u);

  m.def(
      "is_2s_point",
      [](const AdmissibleDatum& d, double x, double y, int nodes) {
        return text(two_s_json(is_2s_point(AlternatingDatum(d), DiskPoint(x, y),
                                           QuadratureRule(static_cast<std::size_t>(nodes)))));
      },
      py::arg("datum"), py::arg("x"), py::arg("y"), py::arg("nodes") = static_cast<int>(QuadratureRule::kDefaultNodes));

  m.def(
      "k6_conditions",
      [](const AdmissibleDatum& d, double x, double y, int nodes) {
        return text(moments_to_json(
            k6_conditions(AlternatingDatum(d), DiskPoint(x, y), QuadratureRule(static_cast<std::size_t>(nodes)))));
      },
      py::arg("datum"), py::arg("x"), py::arg("y"), py::arg("nodes") = static_cast<int>(QuadratureRule::kDefaultNodes));

  m.def(
      "derivatives",
      [](const FourierField& f, double x, double y, double amplitude) {
        return text(derivatives_to_json(derivative_characterization(f, DiskPoint(x, y), amplitude)));
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("amplitude"));

  py::class_<DensityGrid>(m, "State")
      .def_property_readonly("k", [](const DensityGrid& s) { return s.k; })
      .def_property_readonly("shape", [](const DensityGrid& s) { return std::pair{s.grid.n_r(), s.grid.n_theta()}; })
      .def_property_readonly("values", &state_array);

  m.def(
      "solve",
      [](const AdmissibleDatum& d, const std::vector<double>& schedule, int n_r, int n_theta, unsigned threads) {
        SolverOptions opt;
        opt.threads = threads;
        std::vector<ContinuationStep> steps;
        {
          py::gil_scoped_release release;
          steps = continuation(d, schedule, PolarGrid(n_r, n_theta), opt);
        }
        Json stats = Json::array();
        for (const auto& s : steps) stats.push_back(stats_to_json(s.stats));
        return std::pair{steps.back().state, text(stats)};
      },
      py::arg("datum"), py::arg("schedule"), py::arg("n_r") = 128, py::arg("n_theta") = 256, py::arg("threads") = 1u);

  m.def(
      "partition",
      [](const DensityGrid& state, const AdmissibleDatum& d) { return text(partition_summary(extract_partition(state, d))); },
      py::arg("state"), py::arg("datum"));

  m.def(
      "membership",
      [](const DensityGrid& state) {
        const auto r = membership_checks(state);
        return text({{"subharmonic_ok", r.subharmonic_ok},
                     {"superharmonic_ok", r.superharmonic_ok},
                     {"nonnegative_ok", r.nonnegative_ok},
                     {"overlap", r.overlap}});
      },
      py::arg("state"));

  m.def("classify_k6", [](std::vector<int> multiset) { return std::string(to_string(classify_k6(std::move(multiset)))); });
}
