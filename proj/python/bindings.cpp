// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "palinverse/analysis.hpp"
#include "palinverse/error.hpp"
#include "palinverse/forward.hpp"
#include "palinverse/iep.hpp"
#include "palinverse/io.hpp"
#include "palinverse/mup.hpp"
#include "palinverse/spectral.hpp"
#include "palinverse/structfact.hpp"

namespace py = pybind11;
using namespace palinverse;

namespace {

SymmetryClass to_class(const std::string& code) {
    if (code == "tp" || code == "ta" || code == "hp" || code == "ha") return SymmetryClass::from_code(code);
    throw Error(ErrorCode::InvalidArgument, "class must be one of tp, ta, hp, ha");
}

Matrix diag(const std::vector<Complex>& v) {
    Matrix t = Matrix::Zero(Index(v.size()), Index(v.size()));
    for (size_t i = 0; i < v.size(); ++i) t(Index(i), Index(i)) = v[i];
    return t;
}

}  // namespace

PYBIND11_MODULE(palinverse, m) {
    m.doc() = "Inverse eigenvalue problems and no-spillover model updating for palindromic quadratics";

    static py::exception<Error> error(m, "PalinverseError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(error_name(e.code()), e.detail()).ptr());
        }
    });

    py::class_<SymmetryClass>(m, "SymmetryClass")
        .def(py::init(&to_class), py::arg("code"))
        .def_property_readonly("code", &SymmetryClass::code)
        .def_property_readonly("name", &SymmetryClass::name)
        .def_property_readonly("epsilon", [](const SymmetryClass& c) { return c.epsilon; })
        .def_property_readonly("transpose", &SymmetryClass::transpose)
        .def("__repr__", [](const SymmetryClass& c) { return "SymmetryClass('" + c.code() + "')"; });

    py::class_<PalindromicSystem>(m, "PalindromicSystem")
        .def(py::init([](const std::string& cls, const Matrix& a1, const Matrix& a0) {
                 return PalindromicSystem(to_class(cls), a1, a0);
             }),
             py::arg("cls"), py::arg("a1"), py::arg("a0"))
        .def_property_readonly("cls", &PalindromicSystem::cls)
        .def_property_readonly("n", &PalindromicSystem::n)
        .def_property_readonly("a1", &PalindromicSystem::a1)
        .def_property_readonly("a0", &PalindromicSystem::a0)
        .def("symmetry_defect", &PalindromicSystem::symmetry_defect)
        .def("eval", [](const PalindromicSystem& s, Complex lam) { return eval_q(s, lam); }, py::arg("lam"))
        .def("to_json", [](const PalindromicSystem& s) { return io::to_text(io::system_to_json(s)); })
        .def_static("from_json", [](const std::string& text) { return io::system_from_json(io::parse_text(text)); });

    py::class_<EigenPairSet>(m, "EigenPairSet")
        .def_readonly("values", &EigenPairSet::values)
        .def_readonly("vectors", &EigenPairSet::vectors)
        .def_readonly("residuals", &EigenPairSet::residuals)
        .def_readonly("conditions", &EigenPairSet::conditions)
        .def_readonly("pairs", &EigenPairSet::pairs)
        .def_readonly("unmatched", &EigenPairSet::unmatched)
        .def("complete", &EigenPairSet::complete)
        .def("partner", &EigenPairSet::partner);

    m.def("eig_full", &eig_full, py::arg("system"), py::arg("pairing_tol") = kPairingTol);
    m.def("pair_residual", py::overload_cast<const PalindromicSystem&, const Matrix&, const Matrix&>(&pair_residual),
          py::arg("system"), py::arg("x"), py::arg("t"));
    m.def("parameter_from_pair",
          [](const PalindromicSystem& s, const Matrix& x, const Matrix& t) {
              return parameter_from_pair(s, StandardPair(x, t));
          },
          py::arg("system"), py::arg("x"), py::arg("t"));
    m.def("coefficients_from_pair",
          [](const Matrix& x, const Matrix& t, const Matrix& s, const std::string& cls) {
              return coefficients_from_pair(x, t, s, to_class(cls));
          },
          py::arg("x"), py::arg("t"), py::arg("s"), py::arg("cls"));
    m.def("star_factorize",
          [](const Matrix& b, const std::string& cls) {
              StarFactorization f = star_factorize(b, to_class(cls));
              return py::make_tuple(f.y, f.delta.matrix());
          },
          py::arg("b"), py::arg("cls"), "Returns (Y, Delta) with B = Y Delta Y*.");

    py::class_<IepResult>(m, "IepResult")
        .def_readonly("system", &IepResult::system)
        .def_readonly("x", &IepResult::x)
        .def_readonly("t", &IepResult::t)
        .def_readonly("s", &IepResult::s)
        .def_readonly("attempts", &IepResult::attempts)
        .def_readonly("cond_y", &IepResult::cond_y);

    m.def("solve_iep",
          [](const std::string& cls, const Matrix& x1, const Matrix& t1, std::uint64_t seed,
             std::optional<std::vector<Complex>> remaining, int attempts) {
              IepProblem p{to_class(cls), x1.rows(), x1, t1, {}};
              p.options.seed = seed;
              p.options.remaining = std::move(remaining);
              p.options.attempts = attempts;
              return solve_iep_partial(p);
          },
          py::arg("cls"), py::arg("x1"), py::arg("t1"), py::arg("seed") = 0, py::arg("remaining") = py::none(),
          py::arg("attempts") = 20);

    py::class_<MupResult>(m, "MupResult")
        .def_readonly("system", &MupResult::system)
        .def_readonly("x1_new", &MupResult::x1_new)
        .def_readonly("rank", &MupResult::rank)
        .def_readonly("attempts", &MupResult::attempts)
        .def_readonly("smw_residual", &MupResult::smw_residual)
        .def_readonly("constraint_residual", &MupResult::constraint_residual);

    m.def("update_model",
          [](const PalindromicSystem& sys, const std::vector<Complex>& replace, const std::vector<Complex>& with,
             std::uint64_t seed, std::optional<Matrix> x1_new, int attempts) {
              PairSelection sel = select_pairs(eig_full(sys), replace);
              MupProblem p{sys, sel.x1, sel.t1, diag(with), std::move(x1_new), seed, attempts};
              return p.x1_new ? update_model_prescribed(p) : update_model(p);
          },
          py::arg("system"), py::arg("replace"), py::arg("with_"), py::arg("seed") = 0,
          py::arg("x1_new") = py::none(), py::arg("attempts") = 20,
          "Replaces the eigenvalues nearest to `replace` by `with_`, keeping all others.");

    m.def("s_space_dimension",
          [](const Matrix& x, const Matrix& t, const std::string& cls) {
              return s_space_dimension(x, t, to_class(cls));
          },
          py::arg("x"), py::arg("t"), py::arg("cls"));
    m.def("zeta_partition",
          [](const Matrix& s, const Matrix& st, const std::string& cls, double tol) {
              ZetaPartition z = zeta_partition(s, st, to_class(cls), tol);
              return py::make_tuple(z.parts, z.self_paired, z.mu);
          },
          py::arg("s"), py::arg("s_tilde"), py::arg("cls"), py::arg("tol") = 1e-7,
          "Returns (parts, self_paired, mu).");
    m.def("joint_block_diagonalize",
          [](const Matrix& x, const Matrix& j, const Matrix& s, const Matrix& st, const Matrix& sh,
             const std::string& cls) {
              auto r = joint_block_diagonalize(x, j, s, st, sh, to_class(cls));
              return py::make_tuple(r.k, r.sizes, r.off_block);
          },
          py::arg("x"), py::arg("j"), py::arg("s"), py::arg("s_tilde"), py::arg("s_hat"), py::arg("cls"),
          "Returns (K, block sizes, off-block mass).");
}
