#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include "halfdens/config.hpp"
#include "halfdens/harness.hpp"
#include "halfdens/hspace.hpp"
#include "halfdens/kspace.hpp"

namespace py = pybind11;
using namespace halfdens;

namespace {

QuadConfig quad_of(int nodes) { return QuadConfig{nodes, 1e-5}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hilbert half-densities over spaces of scalar products";

  py::class_<SignatureSpec>(m, "SignatureSpec")
      .def(py::init<int, int>(), py::arg("p"), py::arg("p_prime"))
      .def_readonly("p", &SignatureSpec::p)
      .def_readonly("p_prime", &SignatureSpec::p_prime)
      .def_property_readonly("n", &SignatureSpec::n)
      .def_property_readonly("dim", &SignatureSpec::dim);

  py::class_<InvariantMeasure>(m, "InvariantMeasure")
      .def(py::init<SignatureSpec, double>(), py::arg("spec"), py::arg("c") = 1.0)
      .def_readonly("spec", &InvariantMeasure::spec)
      .def_readonly("c", &InvariantMeasure::scale_c);

  m.def("natural_density", [](const Mat& gamma, const InvariantMeasure& mu) { return natural_density(SymMatrix(gamma), mu); },
        py::arg("gamma"), py::arg("measure"));
  m.def("symmetrize", [](const Mat& t) { return symmetrize(t).matrix(); });
  m.def("signature", [](const Mat& g) {
    const auto s = signature(SymMatrix(g));
    return py::make_tuple(s.pos, s.neg, s.zero);
  });
  m.def("gl_action", [](const Mat& g, const Mat& gamma) { return gl_action(GlElement(g), SymMatrix(gamma)).matrix(); });
  m.def(
      "verify_invariance",
      [](const std::vector<std::pair<double, double>>& bumps, const Mat& g, const InvariantMeasure& mu, int nodes) {
        std::vector<BumpFunction> b;
        for (auto [c, w] : bumps) b.push_back({c, w});
        const auto r = verify_invariance(BumpExpansion::product(1.0, b), GlElement(g), mu, quad_of(nodes));
        return py::make_tuple(r.lhs, r.rhs, r.rel_err);
      },
      py::arg("bumps"), py::arg("g"), py::arg("measure"), py::arg("nodes") = 32,
      "Invariance check for one bump product over the coordinates gamma_{i<=j}; returns (lhs, rhs, rel_err).");

  py::class_<Diffeo1D>(m, "Diffeo1D")
      .def(py::init<>())
      .def_static("affine", &Diffeo1D::affine)
      .def_static("soft", &Diffeo1D::soft)
      .def_static("sine", &Diffeo1D::sine)
      .def_static("compose", &Diffeo1D::compose)
      .def_static("inverse_of", &Diffeo1D::inverse_of)
      .def("__call__", &Diffeo1D::operator())
      .def("derivative", &Diffeo1D::derivative)
      .def("inverse", &Diffeo1D::inverse)
      .def("to_json", &Diffeo1D::to_json)
      .def_static("from_json", &Diffeo1D::from_json)
      .def("__repr__", [](const Diffeo1D& d) { return "Diffeo1D(" + d.name() + ")"; });

  py::class_<HalfDensityState>(m, "HalfDensityState")
      .def_static(
          "product",
          [](const InvariantMeasure& mu, std::complex<double> coeff, const std::vector<std::pair<double, double>>& x,
             const std::vector<std::pair<double, double>>& gamma) {
            std::vector<BumpFunction> xb, gb;
            for (auto [c, w] : x) xb.push_back({c, w});
            for (auto [c, w] : gamma) gb.push_back({c, w});
            return HalfDensityState::product(mu, coeff, xb, gb);
          },
          py::arg("measure"), py::arg("coeff"), py::arg("x_bumps"), py::arg("gamma_bumps"))
      .def_property_readonly("blocks", &HalfDensityState::blocks)
      .def("__call__", [](const HalfDensityState& s, const std::vector<double>& x,
                          const std::vector<double>& g) { return s(x, g); })
      .def("__add__", &HalfDensityState::operator+)
      .def("__sub__", &HalfDensityState::operator-)
      .def("__mul__", &HalfDensityState::operator*)
      .def("__rmul__", &HalfDensityState::operator*)
      .def("to_json", &HalfDensityState::to_json)
      .def_static("from_json", &HalfDensityState::from_json);

  m.def("inner", [](const HalfDensityState& a, const HalfDensityState& b, int nodes) { return inner(a, b, quad_of(nodes)); },
        py::arg("s1"), py::arg("s2"), py::arg("nodes") = 48);
  m.def("inner_joint",
        [](const HalfDensityState& a, const HalfDensityState& b, int nodes) { return inner_joint(a, b, quad_of(nodes)); },
        py::arg("s1"), py::arg("s2"), py::arg("nodes") = 24);
  m.def("norm", [](const HalfDensityState& s, int nodes) { return norm(s, quad_of(nodes)); }, py::arg("s"),
        py::arg("nodes") = 48);
  m.def("pullback", py::overload_cast<const Diffeo1D&, const HalfDensityState&>(&pullback));
  m.def("rescale_iso", &rescale_iso, py::arg("s"), py::arg("c_old"), py::arg("c_new"));
  m.def("counterexample_profile", [](const std::vector<double>& xs, int nodes) {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : counterexample_profile(xs, nodes)) out.emplace_back(r.x, r.f);
    return out;
  }, py::arg("xs"), py::arg("nodes") = 64);

  py::class_<PointSet>(m, "PointSet")
      .def(py::init([](const std::vector<double>& flat, int d) { return project(PointTuple(d, flat)); }), py::arg("points"),
           py::arg("d") = 1)
      .def_property_readonly("flat", &PointSet::flat)
      .def("__eq__", [](const PointSet& a, const PointSet& b) { return a == b; });

  py::class_<SparseSection>(m, "SparseSection")
      .def(py::init([](const InvariantMeasure& mu, int n) { return SparseSection(FiberSpace(mu, n)); }), py::arg("measure"),
           py::arg("N"))
      .def(
          "add",
          [](SparseSection& s, const PointSet& y, std::complex<double> coeff, const std::vector<std::pair<double, double>>& g) {
            std::vector<BumpFunction> b;
            for (auto [c, w] : g) b.push_back({c, w});
            s.add(y, BumpExpansion::product(coeff, b));
          },
          py::arg("y"), py::arg("coeff"), py::arg("gamma_bumps"))
      .def("support", [](const SparseSection& s) {
        std::vector<PointSet> out;
        for (const auto& [y, f] : s.entries()) out.push_back(y);
        return out;
      })
      .def("__add__", &SparseSection::operator+)
      .def("__sub__", &SparseSection::operator-)
      .def("to_json", &SparseSection::to_json);
  m.def("k_inner", [](const SparseSection& a, const SparseSection& b, int nodes) { return k_inner(a, b, quad_of(nodes)); },
        py::arg("s1"), py::arg("s2"), py::arg("nodes") = 48);
  m.def("k_pullback", &k_pullback);

  m.def("suite_names", &suite_names);
  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, std::optional<int> nodes, int trials) {
        SuiteConfig c;
        c.seed = seed;
        c.nodes_per_dim = nodes;
        c.trials = trials;
        const auto r = run_suite(name, c);
        return py::make_tuple(r.all_pass(), r.body());
      },
      py::arg("name"), py::arg("seed") = SuiteConfig{}.seed, py::arg("nodes") = py::none(), py::arg("trials") = 20,
      "Runs a suite; returns (all_pass, report body as JSON lines).");
  m.def(
      "convergence_study",
      [](const std::string& op, const std::vector<int>& ladder) {
        const auto r = convergence_study(op, ladder, SuiteConfig{});
        std::vector<std::pair<int, double>> rows;
        for (const auto& row : r.rows) rows.emplace_back(row.nodes, row.rel_err);
        return py::make_tuple(rows, r.strictly_decreasing);
      },
      py::arg("op_id"), py::arg("ladder"));
}
