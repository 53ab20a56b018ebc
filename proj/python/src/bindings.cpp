#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trilaman/checks.hpp"
#include "trilaman/error.hpp"
#include "trilaman/report.hpp"
#include "trilaman/spec_file.hpp"

namespace py = pybind11;
using namespace trilaman;

namespace {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

Configuration to_config(const Points& p) {
  Configuration c(static_cast<int>(p.rows()));
  for (int k = 0; k < p.rows(); ++k) c.set_point(k, {p(k, 0), p(k, 1)});
  return c;
}

Points to_points(const Configuration& c) {
  Points p(c.size(), 2);
  for (int k = 0; k < c.size(); ++k) {
    p(k, 0) = c.a(k);
    p(k, 1) = c.b(k);
  }
  return p;
}

std::string dump(const nlohmann::json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Equilibria and Morse indices of triangulated Laman formations";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::enum_<ReductionCase>(m, "ReductionCase")
      .value("Between", ReductionCase::Between)
      .value("LeftOutside", ReductionCase::LeftOutside)
      .value("RightOutside", ReductionCase::RightOutside);

  py::class_<Law>(m, "Law")
      .def_static("stretch", &Law::stretch, py::arg("k"), py::arg("c"))
      .def_static("power", &Law::power, py::arg("k"), py::arg("alpha"), py::arg("c"))
      .def_static("zero", &Law::zero)
      .def_static(
          "custom",
          [](std::string name, std::function<double(double)> ft, std::function<double(double)> ftp) {
            return Law::custom(std::move(name), std::move(ft), std::move(ftp));
          },
          py::arg("name"), py::arg("ft"), py::arg("ftp"))
      .def("eval", [](const Law& l, double d) {
        const LawValue v = l.eval(d);
        return py::make_tuple(v.f, v.ft, v.ftp);
      })
      .def("f", &Law::f)
      .def("ft", &Law::ft)
      .def("ftp", &Law::ftp)
      .def("potential", &Law::potential)
      .def("class_f", &Law::class_f)
      .def("describe", &Law::describe)
      .def("__repr__", [](const Law& l) { return "<Law " + l.describe() + ">"; });

  m.def("rest_length", &rest_length);
  m.def("reduced_law", &reduced_law, py::arg("f23"), py::arg("f12"), py::arg("f13"),
        py::arg("case"));
  m.def("lift_reduced_law", [](const Law& fstar) {
    const LiftedLaws l = lift_reduced_law(fstar);
    return py::make_tuple(l.f12, l.f13, l.f23);
  });
  m.def(
      "virtual_interaction",
      [](const Law& f12, const Law& f13, ReductionCase c, double d23) {
        const VirtualInteraction v = virtual_interaction(f12, f13, c, d23);
        py::dict out;
        out["g"] = v.g;
        out["gprime"] = v.gprime;
        out["d12"] = v.d12;
        out["d13"] = v.d13;
        out["residual"] = v.residual;
        return out;
      },
      py::arg("f12"), py::arg("f13"), py::arg("case"), py::arg("d23"));

  py::class_<TLGraph>(m, "TLGraph")
      .def_property_readonly("n", &TLGraph::n)
      .def_property_readonly("edges",
                             [](const TLGraph& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
                               return out;
                             })
      .def_property_readonly("base_edge",
                             [](const TLGraph& g) {
                               return std::pair<int, int>(g.base_edge().u, g.base_edge().v);
                             })
      .def_property_readonly("steps", [](const TLGraph& g) {
        std::vector<std::pair<int, std::pair<int, int>>> out;
        for (const auto& s : g.steps()) out.push_back({s.vertex, s.parents});
        return out;
      });

  m.def(
      "build_tlg",
      [](std::pair<int, int> base, const std::vector<std::pair<int, std::pair<int, int>>>& steps) {
        std::vector<HennebergStep> hs;
        for (const auto& [v, par] : steps) hs.push_back({v, par});
        return build_tlg(Edge(base.first, base.second), hs);
      },
      py::arg("base_edge"), py::arg("steps"));
  m.def("recognize_tlg", [](const std::vector<std::pair<int, int>>& edges) {
    std::vector<Edge> es;
    for (const auto& [a, b] : edges) es.emplace_back(a, b);
    return recognize_tlg(es);
  });

  py::class_<RMASystem>(m, "RMASystem")
      .def(py::init<TLGraph, std::vector<Law>>(), py::arg("graph"), py::arg("laws"))
      .def_static("uniform", &RMASystem::uniform)
      .def_property_readonly("graph", &RMASystem::graph)
      .def_property_readonly("n", &RMASystem::n)
      .def_property_readonly("laws", &RMASystem::laws)
      .def("admissible", &RMASystem::admissible);

  m.def("potential", [](const RMASystem& s, const Points& p) { return potential(s, to_config(p)); });
  m.def("vector_field", [](const RMASystem& s, const Points& p) {
    return Eigen::VectorXd(vector_field(s, to_config(p)));
  });
  m.def("residual", [](const RMASystem& s, const Points& p) { return residual(s, to_config(p)); });
  m.def("paper_hessian", [](const RMASystem& s, const Points& p) {
    return Eigen::MatrixXd(paper_hessian(s, to_config(p)));
  });
  m.def(
      "inertia",
      [](const Eigen::MatrixXd& h, double tol) {
        const InertiaTriple t = inertia(h, tol);
        return py::make_tuple(t.n_plus, t.n_zero, t.n_minus);
      },
      py::arg("matrix"), py::arg("zero_tol") = kDefaultZeroEigTol);

  m.def(
      "flow",
      [](const RMASystem& s, const Points& p, double tol, double t_max) {
        FlowOptions o;
        o.tol = tol;
        o.t_max = t_max;
        const FlowResult r = flow(s, to_config(p), o);
        py::dict out;
        out["config"] = to_points(r.final_config);
        out["status"] = std::string(to_string(r.status));
        out["residual"] = r.residual;
        out["time"] = r.time;
        out["potential_start"] = r.potential_start;
        out["potential_end"] = r.potential_end;
        out["potential_monotone"] = r.potential_monotone;
        return out;
      },
      py::arg("system"), py::arg("points"), py::arg("tol") = 1e-10, py::arg("t_max") = 1e5);

  m.def("canonical_partition", [](const TLGraph& g, const Points& p, double tol) {
    const CanonicalPartition cp = canonical_partition(g, to_config(p), tol);
    std::vector<std::vector<std::pair<int, int>>> out;
    for (const auto& part : cp.parts) {
      out.emplace_back();
      for (const auto& e : part.edges) out.back().emplace_back(e.u, e.v);
    }
    return out;
  }, py::arg("graph"), py::arg("points"), py::arg("col_tol") = kDefaultCollinearTol);

  m.def("_enumerate_line_equilibria", [](const RMASystem& s) {
    const EnumerationResult r = enumerate_line_equilibria(s);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& o : r.orbits) out.push_back(to_json(o));
    return dump(out);
  });
  m.def("_check_index_formula", [](const RMASystem& s, const Points& p) {
    return dump(to_json(check_index_formula(s, to_config(p))));
  });
  m.def("_check_inertia_formula", [](const RMASystem& s, const Points& p) {
    return dump(to_json(check_inertia_formula(s, to_config(p))));
  });
  m.def("repair_degenerate_orbits", [](const RMASystem& s) {
    // Repairs every degenerate line orbit; returns the perturbed system.
    RMASystem current = s;
    for (const auto& o : enumerate_line_equilibria(s).orbits)
      if (!o.nondegenerate) current = repair_degenerate(current, o).system;
    return current;
  });

  m.def("_morse_report", [](const std::string& spec_text) {
    auto lines = morse_report(parse_spec_text(spec_text)).json_lines();
    return lines;
  });
  m.def("load_spec_system", [](const std::string& spec_text) {
    return parse_spec_text(spec_text).system();
  });
  m.def(
      "_scan",
      [](const std::string& spec_text, std::size_t samples, std::uint64_t seed, int workers,
         const std::string& family) {
        const SystemSpec spec = parse_spec_text(spec_text);
        SamplerSpec sampler;
        sampler.family = family;
        ScanOptions so;
        so.samples = samples;
        so.seed = seed;
        so.workers = workers;
        so.tolerances = spec.tolerances;
        so.timing = false;
        py::gil_scoped_release release;
        return run_genericity_scan(spec.graph, sampler, so).json_lines();
      },
      py::arg("spec_text"), py::arg("samples"), py::arg("seed") = 0, py::arg("workers") = 1,
      py::arg("family") = "S");
}
