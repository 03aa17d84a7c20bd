#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "exciton/errors.hpp"
#include "exciton/instance_io.hpp"
#include "exciton/oracle.hpp"
#include "exciton/spectral_flow.hpp"

namespace py = pybind11;
using namespace exciton;

namespace
{

DiagonalModel make_diagonal(const std::vector<TrigPhase> &phases, std::optional<Matrix> conjugation)
{
  DiagonalModel m;
  m.phases = phases;
  m.conjugation = std::move(conjugation);
  return m;
}

FamilyMap families_of(const UnitaryLoop &loop)
{
  const auto *ctx = loop.graph_context();
  if (!ctx) throw Error(ErrorKind::Usage, "sweep needs a graph-backed loop");
  FamilyMap out;
  for (std::size_t v = 0; v < ctx->families.size(); ++v) out.emplace(ctx->graph.vertices()[v], ctx->families[v]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Exciton counting by spectral flow of the scattering loop";

  // ExcitonError carries the error kind and the CLI exit code as attributes.
  // Owned by the module for the life of the process.
  static py::handle error_type = py::exception<Error>(m, "ExcitonError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try
    {
      if (p) std::rethrow_exception(p);
    }
    catch (const Error &e)
    {
      py::object exc = error_type(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      exc.attr("exit_code") = exit_code(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("eigen_cluster", &Tolerances::eigen_cluster)
      .def_readwrite("bisection_k", &Tolerances::bisection_k)
      .def_readwrite("branch_step_cap", &Tolerances::branch_step_cap)
      .def_readwrite("det_step_cap", &Tolerances::det_step_cap)
      .def_readwrite("merge_radius", &Tolerances::merge_radius)
      .def_readwrite("delta_cap", &Tolerances::delta_cap)
      .def_readwrite("winding_residual", &Tolerances::winding_residual)
      .def_readwrite("unitarity", &Tolerances::unitarity)
      .def_readwrite("eigen_residual", &Tolerances::eigen_residual);

  py::class_<UnitaryLoop>(m, "UnitaryLoop")
      .def_property_readonly("dimension", &UnitaryLoop::dimension)
      .def_property_readonly("kind", [](const UnitaryLoop &l) { return std::string(to_string(l.kind())); })
      .def("eval", &UnitaryLoop::eval, py::arg("k"))
      .def("derivative", &UnitaryLoop::derivative, py::arg("k"))
      .def("conjugated", &UnitaryLoop::conjugated, py::arg("v"))
      .def_property_readonly("total_length",
                             [](const UnitaryLoop &l) -> std::optional<Length> {
                               if (const auto *ctx = l.graph_context()) return ctx->total_length();
                               return std::nullopt;
                             })
      .def_property_readonly("total_winding", [](const UnitaryLoop &l) -> std::optional<int> {
        if (const auto *ctx = l.graph_context()) return ctx->total_winding();
        return std::nullopt;
      });

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("vertices", [](const Instance &i) { return i.graph.vertices; })
      .def_property_readonly("edges",
                             [](const Instance &i) {
                               std::vector<std::tuple<std::string, std::string, Length>> out;
                               for (const auto &e : i.graph.edges) out.emplace_back(e.a, e.b, e.length);
                               return out;
                             })
      .def_property_readonly("tolerances", &Instance::effective_tolerances)
      .def("loop", &Instance::loop)
      .def("to_json", [](const Instance &i) { return to_json(i).dump(); })
      .def("__eq__", [](const Instance &a, const Instance &b) { return a == b; });

  m.def("load_instance", &load_instance, py::arg("path"));
  m.def(
      "parse_instance", [](const std::string &text) { return parse_instance(nlohmann::json::parse(text)); },
      py::arg("text"));
  m.def("random_instance", [](std::uint64_t seed) { return random_instance(seed); }, py::arg("seed"));

  py::class_<TrigPhase>(m, "TrigPhase")
      .def(py::init([](int slope, double offset, std::vector<double> cosines, std::vector<double> sines) {
             return TrigPhase{slope, offset, std::move(cosines), std::move(sines)};
           }),
           py::arg("slope"), py::arg("offset") = 0.0, py::arg("cosines") = std::vector<double>{},
           py::arg("sines") = std::vector<double>{})
      .def_readonly("slope", &TrigPhase::slope)
      .def_readonly("offset", &TrigPhase::offset)
      .def("__call__", &TrigPhase::operator(), py::arg("k"));

  m.def(
      "diagonal_loop",
      [](const std::vector<TrigPhase> &phases, std::optional<Matrix> conjugation) {
        return make_diagonal(phases, std::move(conjugation)).loop();
      },
      py::arg("phases"), py::arg("conjugation") = py::none());
  m.def(
      "monomial_loop", [](std::vector<int> slopes) { return monomial_model(std::move(slopes)).loop(); },
      py::arg("slopes"));

  py::class_<EigenphaseTrace>(m, "EigenphaseTrace")
      .def_readonly("grid", &EigenphaseTrace::grid)
      .def_readonly("branches", &EigenphaseTrace::branches)
      .def_property_readonly("total_increment", &EigenphaseTrace::total_increment);

  py::class_<Crossing>(m, "Crossing")
      .def_readonly("k_star", &Crossing::k_star)
      .def_readonly("z_star", &Crossing::z_star)
      .def_readonly("multiplicity", &Crossing::multiplicity)
      .def_readonly("iota_plus", &Crossing::iota_plus)
      .def_readonly("iota_minus", &Crossing::iota_minus)
      .def_readonly("iota", &Crossing::iota)
      .def("__repr__", [](const Crossing &c) {
        return "Crossing(k=" + std::to_string(c.k_star) + ", m=" + std::to_string(c.multiplicity) +
               ", iota=" + std::to_string(c.iota) + ")";
      });

  py::class_<IndexReport>(m, "IndexReport")
      .def_readonly("alpha", &IndexReport::alpha)
      .def_readonly("crossings", &IndexReport::crossings)
      .def_readonly("q", &IndexReport::q)
      .def_readonly("m", &IndexReport::m)
      .def_readonly("d0", &IndexReport::d0)
      .def_readonly("dpi", &IndexReport::dpi)
      .def_readonly("N", &IndexReport::N)
      .def_readonly("lower_bound", &IndexReport::lower_bound)
      .def_readonly("theorem_a_ok", &IndexReport::theorem_a_ok)
      .def_readonly("bound_ok", &IndexReport::bound_ok)
      .def_readonly("warnings", &IndexReport::warnings)
      .def("to_json", [](const IndexReport &r) { return to_json(r).dump(); });

  m.def(
      "trace_eigenphases",
      [](const UnitaryLoop &loop, std::size_t grid, const Tolerances &tol) {
        return trace_eigenphases(loop, grid, tol);
      },
      py::arg("loop"), py::arg("initial_grid") = 64, py::arg("tol") = Tolerances{});
  m.def(
      "winding_number", [](const UnitaryLoop &loop, const Tolerances &tol) { return winding_number(loop, tol); },
      py::arg("loop"), py::arg("tol") = Tolerances{});
  m.def(
      "multiplicity_at",
      [](const UnitaryLoop &loop, double k, const Tolerances &tol) { return multiplicity_at(loop, k, tol); },
      py::arg("loop"), py::arg("k"), py::arg("tol") = Tolerances{});
  m.def(
      "index_report",
      [](const UnitaryLoop &loop, const Tolerances &tol, std::size_t grid, bool band) {
        return index_report(loop, ReportOptions{tol, grid, band});
      },
      py::arg("loop"), py::arg("tol") = Tolerances{}, py::arg("initial_grid") = 64, py::arg("band") = false);
  m.def(
      "long_arm_sweep",
      [](const UnitaryLoop &loop, const std::vector<Length> &scales) {
        const auto families = families_of(loop);
        const auto rows = long_arm_sweep(loop.graph_context()->graph, families, scales);
        std::vector<std::tuple<Length, int, int, int, int>> out;
        for (const auto &r : rows) out.emplace_back(r.t, r.alpha, r.q, r.m, r.gap);
        return out;
      },
      py::arg("loop"), py::arg("scales"));
  m.def(
      "dense_scan_crossings",
      [](const UnitaryLoop &loop, std::size_t grid) {
        std::vector<std::pair<double, int>> out;
        for (const auto &c : dense_scan_crossings(loop, grid)) out.emplace_back(c.k_star, c.multiplicity);
        return out;
      },
      py::arg("loop"), py::arg("grid_size") = 100000);
}
