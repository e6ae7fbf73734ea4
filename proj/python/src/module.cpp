#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twomode/experiments.hpp"
#include "twomode/metrology.hpp"
#include "twomode/probe.hpp"
#include "twomode/spectral.hpp"
#include "twomode/states.hpp"
#include "twomode/variational.hpp"

namespace py = pybind11;
using namespace twomode;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CArray to_numpy(const DickeVector& v) {
  const auto a = v.amplitudes();
  return CArray(std::vector<py::ssize_t>{static_cast<py::ssize_t>(a.size())}, a.data());
}

CArray to_numpy(const CMatrix& m) {
  CArray out({m.size(), m.size()});
  auto r = out.mutable_unchecked<2>();
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r(i, j) = m(i, j);
  return out;
}

DickeVector from_numpy(const CArray& a) {
  if (a.ndim() != 1 || a.size() < 2) throw DomainError("state must be a 1-d array of length N+1 >= 2");
  std::vector<cplx> amps(a.data(), a.data() + a.size());
  return {ParticleNumber(static_cast<int>(a.size()) - 1), std::move(amps)};
}

// An operator is a term name or "Jx"/"Jy"/"Jz".
BandedHermitian operator_for(int N, const std::string& name) {
  ParticleNumber n(N);
  if (name == "Jx") return build_su2(n, Axis::X);
  if (name == "Jy") return build_su2(n, Axis::Y);
  if (name == "Jz") return build_su2(n, Axis::Z);
  return build_term(n, parse_term(name));
}

Branch parse_branch(const std::string& s) {
  if (s == "+") return Branch::Plus;
  if (s == "-") return Branch::Minus;
  throw DomainError("branch must be \"+\" or \"-\"");
}

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json py_to_json(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-mode boson metrology toolkit";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

  m.def("operator_matrix", [](int N, const std::string& name) { return to_numpy(operator_for(N, name).dense()); },
        py::arg("N"), py::arg("name"), "Dense matrix of a Hamiltonian term or su(2) generator in the Dicke basis.");

  m.def(
      "eigh",
      [](int N, const std::string& name, bool by_parity) {
        const auto op = operator_for(N, name);
        const auto dec = by_parity ? eigh_by_parity(op) : eigh(op);
        CArray vecs({dec.size(), dec.size()});
        auto r = vecs.mutable_unchecked<2>();
        for (int j = 0; j < dec.size(); ++j)
          for (int k = 0; k < dec.size(); ++k) r(k, j) = dec.eigenvectors[j][k];
        return py::make_tuple(dec.eigenvalues, vecs);
      },
      py::arg("N"), py::arg("name"), py::arg("by_parity") = false,
      "Ascending eigenvalues and eigenvectors (as columns).");

  m.def("coherent", [](int N, cplx zeta) { return to_numpy(coherent(ParticleNumber(N), SpherePoint::finite(zeta))); },
        py::arg("N"), py::arg("zeta"));
  m.def("noon", [](int N, double phi) { return to_numpy(noon(ParticleNumber(N), phi)); }, py::arg("N"),
        py::arg("phi") = 0.0);
  m.def("omega",
        [](int N, double c, const std::string& branch) { return to_numpy(omega(ParticleNumber(N), c, parse_branch(branch))); },
        py::arg("N"), py::arg("c"), py::arg("branch") = "+");
  m.def("psi4", [](int N) { return to_numpy(psi4(ParticleNumber(N))); }, py::arg("N"));
  m.def("xi_pair", [](int N, cplx w, cplx z) { return to_numpy(xi_pair(ParticleNumber(N), w, z)); }, py::arg("N"),
        py::arg("w"), py::arg("z"));

  m.def("fidelity", [](const CArray& a, const CArray& b) { return fidelity(from_numpy(a), from_numpy(b)); });
  m.def(
      "variance",
      [](const CArray& v, const std::string& name) {
        const auto s = from_numpy(v);
        return variance(operator_for(s.particles().value(), name), s);
      },
      py::arg("state"), py::arg("operator"));
  m.def(
      "qfi",
      [](const CArray& v, const std::string& name) {
        const auto s = from_numpy(v);
        return qfi_pure(s, operator_for(s.particles().value(), name)).qfi;
      },
      py::arg("state"), py::arg("generator"));
  m.def("closed_form_psi4_variance", [](int N) { return closed_form_psi4_variance(ParticleNumber(N)); });

  m.def("tilde_c", [](int N) {
    const auto s = tilde_c(ParticleNumber(N));
    return py::make_tuple(s.c_tilde, s.lambda_tilde);
  }, py::arg("N"), "Consistency parameter and eigenvalue estimate (c, lambda).");

  m.def("table1_row", [](int N) { return table1_row(N).normalized; }, py::arg("N"),
        "QFI of the pair ground state along 2Jx, divided by (2N)^2.");
  m.def("table1_default_ns", &table1_default_ns);
  m.def(
      "fig2_row",
      [](int N) {
        const auto r = fig2_row(N);
        return py::dict(py::arg("N") = r.N, py::arg("c") = r.c, py::arg("plus_e1") = r.plus_e1,
                        py::arg("plus_e2") = r.plus_e2, py::arg("minus_e1") = r.minus_e1,
                        py::arg("minus_e2") = r.minus_e2, py::arg("best_infidelity") = r.best_infidelity());
      },
      py::arg("N"));
  m.def(
      "fig3_row",
      [](int N) {
        const auto r = fig3_row(N);
        return py::dict(py::arg("N") = r.N, py::arg("infidelity_plus") = r.infidelity_plus,
                        py::arg("infidelity_minus") = r.infidelity_minus,
                        py::arg("best_sign") = std::string(1, r.best_sign()));
      },
      py::arg("N"));
  m.def(
      "fig4_row",
      [](int N, bool optimize) {
        const auto r = fig4_row(N, optimize);
        py::dict d(py::arg("N") = r.N, py::arg("infidelity_coherent") = r.infidelity_coherent,
                   py::arg("infidelity_two_eq") = r.infidelity_two_eq, py::arg("w") = r.xi.w,
                   py::arg("z_squared") = r.xi.z_squared);
        if (r.opt) {
          d["infidelity_optimized"] = r.opt->infidelity;
          d["w0"] = r.opt->w0;
          d["z0"] = r.opt->z0;
        }
        return d;
      },
      py::arg("N"), py::arg("optimize") = true);
  m.def(
      "headline_scalars",
      [](int N) {
        const auto s = headline_scalars(N);
        return py::dict(py::arg("N") = s.N, py::arg("f_max") = s.f_max, py::arg("gap_family") = s.gap_family,
                        py::arg("gap_psi4") = s.gap_psi4, py::arg("nu_ratio") = s.nu_ratio,
                        py::arg("nu_ratio_lambda_max_sq") = s.nu_ratio_lambda_max_sq,
                        py::arg("psi4_variance") = s.psi4_variance, py::arg("psi4_closed_form") = s.psi4_closed_form,
                        py::arg("c_tilde") = s.consistency.c_tilde, py::arg("ground_fidelity") = s.ground_fidelity);
      },
      py::arg("N") = 160);

  m.def("probe", [](const py::object& config) { return json_to_py(run_probe(py_to_json(config))); },
        py::arg("config"), "Evaluates a probe config (dict) and returns the QFI report as a dict.");
}
