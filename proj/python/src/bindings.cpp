#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geninv/calculus.hpp"
#include "geninv/diagnostics.hpp"
#include "geninv/geninv.hpp"
#include "geninv/io.hpp"
#include "geninv/perturb.hpp"

namespace py = pybind11;
using namespace geninv;

namespace {

ToleranceConfig tolerances(double rank_rel_tol, double residual_tol) {
  ToleranceConfig tol;
  tol.rank_rel_tol = rank_rel_tol;
  tol.residual_tol = residual_tol;
  tol.validate();
  return tol;
}

py::dict certificate(const InverseCertificate& cert) {
  py::dict d;
  d["inverse"] = cert.inverse;
  d["kind"] = to_string(cert.kind);
  d["residuals"] = cert.residuals;
  d["restricted_condition"] = cert.restricted_condition;
  d["range_gap"] = cert.range_gap;
  d["nullspace_gap"] = cert.nullspace_gap;
  d["direct_sum_margin"] = cert.direct_sum_margin;
  d["scale"] = cert.scale;
  d["range_basis"] = cert.range.basis;
  d["nullspace_basis"] = cert.nullspace.basis;
  return d;
}

py::object json_to_python(const io::Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized inverses with residual certificates.";

  static py::exception<Error> exc(m, "GeninvError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const char* kinds[] = {"input", "existence", "kernel"};
      py::object err = py::reinterpret_borrow<py::object>(exc)(e.what());
      err.attr("kind") = kinds[static_cast<int>(e.kind())];
      err.attr("clause") = e.clause();
      err.attr("margin") = e.margin();
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  constexpr double rank = 1e-10, res = 1e-9;

  m.def(
      "pinv", [](const Matrix& a, double r, double s) { return pinv(a, tolerances(r, s)); },
      py::arg("a"), py::arg("rank_rel_tol") = rank, py::arg("residual_tol") = res);
  m.def(
      "moore_penrose",
      [](const Matrix& a, double r, double s) {
        return certificate(moore_penrose(a, tolerances(r, s)));
      },
      py::arg("a"), py::arg("rank_rel_tol") = rank, py::arg("residual_tol") = res);
  m.def(
      "outer_prescribed",
      [](const Matrix& a, const Matrix& t, const Matrix& s, double r, double q) {
        const ToleranceConfig tol = tolerances(r, q);
        return certificate(
            outer_prescribed(a, column_space(t, tol), column_space(s, tol), tol));
      },
      py::arg("a"), py::arg("t"), py::arg("s"), py::arg("rank_rel_tol") = rank,
      py::arg("residual_tol") = res,
      "Outer inverse with range R(t) and null space R(s); t and s are spanning matrices.");
  m.def(
      "bc_inverse",
      [](const Matrix& a, const Matrix& b, const Matrix& c, double r, double s) {
        return certificate(bc_inverse(a, b, c, tolerances(r, s)));
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("rank_rel_tol") = rank,
      py::arg("residual_tol") = res);
  m.def(
      "inverse_along",
      [](const Matrix& a, const Matrix& d, double r, double s) {
        return certificate(inverse_along(a, d, tolerances(r, s)));
      },
      py::arg("a"), py::arg("d"), py::arg("rank_rel_tol") = rank, py::arg("residual_tol") = res);
  m.def(
      "bott_duffin",
      [](const Matrix& a, const Matrix& p, const Matrix& q, double r, double s) {
        const ToleranceConfig tol = tolerances(r, s);
        return certificate(
            bott_duffin(a, projector_from_matrix(p, tol), projector_from_matrix(q, tol), tol));
      },
      py::arg("a"), py::arg("p"), py::arg("q"), py::arg("rank_rel_tol") = rank,
      py::arg("residual_tol") = res);

  m.def(
      "gap",
      [](const Matrix& m_span, const Matrix& n_span, double r) {
        const ToleranceConfig tol = tolerances(r, res);
        const GapResult g = gap(column_space(m_span, tol), column_space(n_span, tol));
        return py::make_tuple(g.delta_mn, g.delta_nm, g.gap);
      },
      py::arg("m"), py::arg("n"), py::arg("rank_rel_tol") = rank,
      "(delta(M, N), delta(N, M), gap) for the column spaces of m and n.");

  m.def(
      "perturb",
      [](const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& e, bool outside) {
        const InverseCertificate cert = bc_inverse(a, b, c);
        return json_to_python(
            io::perturbation_to_json(perturbed_bc_inverse(cert, e, {}, outside),
                                     io::Field::complex));
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("e"), py::arg("allow_outside") = false);

  m.def("left_regular", &left_regular, py::arg("a"), py::arg("k"));
  m.def("right_regular", &right_regular, py::arg("a"), py::arg("k"));

  m.def(
      "derivative_check_mp",
      [](const std::function<Matrix(double)>& a, double t0) {
        const DerivativeReport rep =
            finite_difference_check(CurveFamily::mp({a, -1e300, 1e300, "a"}), t0);
        return json_to_python(io::derivative_to_json(rep, io::Field::complex));
      },
      py::arg("a"), py::arg("t0"),
      "Finite-difference check of the Moore-Penrose derivative along the curve a(t).");

  m.def(
      "run",
      [](const std::string& name, const std::vector<std::string>& inputs, std::uint64_t seed) {
        io::RunConfig cfg;
        cfg.seed = seed;
        const io::RunResult r = io::run_subcommand(name, inputs, cfg);
        return py::make_tuple(json_to_python(r.report), r.exit_code);
      },
      py::arg("name"), py::arg("inputs"), py::arg("seed") = 0,
      "Runs a CLI subcommand in-process; returns (report, exit_code).");
}
