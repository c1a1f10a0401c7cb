#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unisim/oracle.hpp"
#include "unisim/similarity.hpp"
#include "unisim/stability.hpp"

namespace py = pybind11;
using namespace unisim;

namespace {

Config make_config(double tol_match, double tol_cluster, double tol_rank, double tol_certificate,
                   int max_n, bool force) {
  Config cfg;
  cfg.tol_match = tol_match;
  cfg.tol_cluster = tol_cluster;
  cfg.tol_rank = tol_rank;
  cfg.tol_certificate = tol_certificate;
  cfg.max_n_family = max_n;
  cfg.force = force;
  return cfg;
}

py::dict member_dict(const CanonicalMember& k) {
  py::dict d;
  d["K"] = k.K;
  d["m"] = k.m;
  d["psi"] = k.psi;
  d["f"] = k.f;
  d["x"] = k.x_diag;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Unitary similarity of nonderogatory matrices via canonical families.";

  py::register_exception<unisim::error>(m, "Error", PyExc_RuntimeError);

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("similar", &Verdict::similar)
      .def_property_readonly("reason", [](const Verdict& v) { return std::string(to_string(v.reason)); })
      .def_readonly("m1", &Verdict::m1)
      .def_readonly("m2", &Verdict::m2)
      .def_readonly("certificate", &Verdict::certificate)
      .def_readonly("residual", &Verdict::residual)
      .def_readonly("nonderogatory_margin", &Verdict::nonderogatory_margin)
      .def("__repr__", [](const Verdict& v) {
        return "<Verdict " + std::string(to_string(v.reason)) + ">";
      });

  m.def(
      "schur",
      [](const ComplexMatrix& a) {
        SchurForm s = schur(a);
        return py::make_tuple(s.T, s.U);
      },
      py::arg("a"), "Complex Schur form (T, U) with A = U T U*.");

  m.def(
      "check_unitary_similarity",
      [](const ComplexMatrix& a, const ComplexMatrix& b, double tol_match, double tol_cluster,
         double tol_rank, double tol_certificate, int max_n, bool force) {
        return check_unitary_similarity(
            a, b, make_config(tol_match, tol_cluster, tol_rank, tol_certificate, max_n, force));
      },
      py::arg("a"), py::arg("b"), py::arg("tol_match") = Config{}.tol_match,
      py::arg("tol_cluster") = Config{}.tol_cluster, py::arg("tol_rank") = Config{}.tol_rank,
      py::arg("tol_certificate") = Config{}.tol_certificate,
      py::arg("max_n") = Config{}.max_n_family, py::arg("force") = false,
      "Decide unitary similarity; a similar verdict carries U with B = U A U*.");

  m.def("certificate_residual", &certificate_residual, py::arg("a"), py::arg("b"), py::arg("u"));

  m.def(
      "extract_phase",
      [](const ComplexMatrix& t, double tol_zero) {
        const PhaseData p = extract_phase(t, tol_zero);
        return py::make_tuple(p.r, p.phi, p.zero_mask);
      },
      py::arg("t"), py::arg("tol_zero") = 1e-12);

  m.def(
      "solve_phase",
      [](const ComplexMatrix& t, const IntVector& mvec) {
        const PhaseSolution s = solve_phase(extract_phase(t), mvec);
        return py::make_tuple(s.psi, s.f, s.solver_residual);
      },
      py::arg("t"), py::arg("m"));

  m.def(
      "canonical_member",
      [](const ComplexMatrix& t, std::optional<IntVector> mvec) {
        const auto count = static_cast<Eigen::Index>(PairIndex::count(static_cast<int>(t.rows())));
        return member_dict(canonical_member(t, mvec.value_or(IntVector::Zero(count))));
      },
      py::arg("t"), py::arg("m") = py::none());

  m.def(
      "family",
      [](const ComplexMatrix& t) {
        py::list out;
        for (const auto& k : family(t).members) out.append(member_dict(k));
        return out;
      },
      py::arg("t"), "Canonical family of an upper triangular matrix.");

  m.def(
      "specht_pearcy_test",
      [](const ComplexMatrix& a, const ComplexMatrix& b, int max_len) {
        return specht_pearcy_test(a, b, max_len).verdict == TraceVerdict::Refuted;
      },
      py::arg("a"), py::arg("b"), py::arg("max_len") = 8,
      "True when some trace word of length <= max_len refutes similarity.");

  m.def(
      "gen_nonderogatory",
      [](const std::vector<Complex>& spectrum, std::uint64_t seed) {
        return gen_nonderogatory(static_cast<int>(spectrum.size()), spectrum, seed);
      },
      py::arg("spectrum"), py::arg("seed") = 0);

  m.def("random_unitary", &random_unitary, py::arg("n"), py::arg("seed") = 0);

  m.def("builtin_a4", &builtin_a4, py::arg("eps") = Complex(0.0));
}
