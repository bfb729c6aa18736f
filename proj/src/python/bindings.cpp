#include "compound/combinat.hpp"
#include "compound/error.hpp"
#include "compound/exterior.hpp"
#include "compound/recovery.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace compound;

namespace {

py::dict report_dict(const RecoveryReport& r) {
    py::dict d;
    d["resample_count"] = r.resample_count;
    d["preprocessing_used"] = r.preprocessing_used;
    d["reconstruction_residual"] = r.reconstruction_residual;
    d["inferred_r"] = r.inferred_r;
    d["singular_value_residual"] = r.singular_value_residual;
    d["sign_fallback_used"] = r.sign_fallback_used;
    py::dict t;
    for (const auto& [stage, ms] : r.stage_timings_ms) t[py::str(stage)] = ms;
    d["timings_ms"] = t;
    return d;
}

py::dict family_dict(const RankOneFamily& f) {
    py::dict d;
    d["u"] = f.u;
    d["sigma"] = f.sigma;
    d["v"] = f.v;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multiplicative compound matrices and their inverses";

    static py::handle error_type = py::exception<Error>(m, "CompoundError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("tag") = std::string(to_string(e.tag()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<TolerancePolicy>(m, "TolerancePolicy")
        .def(py::init<>())
        .def_readwrite("rank_rtol", &TolerancePolicy::rank_rtol)
        .def_readwrite("gap_rtol", &TolerancePolicy::gap_rtol)
        .def_readwrite("sign_atol", &TolerancePolicy::sign_atol)
        .def_readwrite("residual_rtol", &TolerancePolicy::residual_rtol)
        .def_readwrite("max_resample", &TolerancePolicy::max_resample)
        .def_readwrite("rng_seed", &TolerancePolicy::rng_seed)
        .def_readwrite("exhaustive_sign_search", &TolerancePolicy::exhaustive_sign_search)
        .def_readwrite("canonical_sign", &TolerancePolicy::canonical_sign);

    m.def("binomial", &binomial);
    m.def("lex_tuples", [](int n, int k) {
        std::vector<std::vector<int>> out;
        for (const auto& t : lex_tuples(n, k)) out.emplace_back(t.entries().begin(), t.entries().end());
        return out;
    });
    m.def("indexof_tuple", [](std::vector<int> t, int n) { return indexof_tuple(IndexTuple(std::move(t), n)); });
    m.def("compound", &compound::compound, py::arg("x"), py::arg("k"));
    m.def("wedge", py::overload_cast<const Matrix&>(&wedge), py::arg("factors"));
    m.def("wedge_matrix", [](const Vector& z, int n, int k) { return wedge_matrix(z, n, k).data; });
    m.def(
        "is_decomposable",
        [](const Vector& z, int n, int k, const TolerancePolicy& p) {
            const auto d = is_decomposable(z, n, k, p);
            return py::make_tuple(d.decomposable, d.kernel);
        },
        py::arg("z"), py::arg("n"), py::arg("k"), py::arg("policy") = TolerancePolicy{});
    m.def("adjugate", &adjugate);
    m.def("adjugate_via_compound", &adjugate_via_compound);

    m.def(
        "inverse_compound",
        [](const Matrix& mat, int n, int m_cols, int k, const TolerancePolicy& p) {
            const auto res = inverse_compound(mat, n, m_cols, k, p);
            py::dict d;
            d["outcome"] = outcome_tag(res.outcome);
            d["report"] = report_dict(res.report);
            if (const auto* u = std::get_if<UniqueUpToSign>(&res.outcome)) {
                d["a"] = u->a;
                d["sign_ambiguous"] = u->sign_ambiguous;
            } else if (const auto* f = std::get_if<RankOneFamily>(&res.outcome)) {
                d["family"] = family_dict(*f);
            } else {
                d["k"] = std::get<RankDeficientFamily>(res.outcome).k;
            }
            return d;
        },
        py::arg("m"), py::arg("n"), py::arg("m_cols"), py::arg("k"), py::arg("policy") = TolerancePolicy{});
    m.def(
        "rank_one_inverse",
        [](const Matrix& mat, int n, int m_cols, int k, const TolerancePolicy& p) {
            return family_dict(rank_one_inverse(mat, n, m_cols, k, p));
        },
        py::arg("m"), py::arg("n"), py::arg("m_cols"), py::arg("k"), py::arg("policy") = TolerancePolicy{});
    m.def(
        "family_contains",
        [](const Matrix& b, const Matrix& u, const Matrix& sigma, const Matrix& v, const TolerancePolicy& p) {
            return family_contains(b, RankOneFamily{u, sigma, v}, p);
        },
        py::arg("b"), py::arg("u"), py::arg("sigma"), py::arg("v"), py::arg("policy") = TolerancePolicy{});
    m.def(
        "closed_form_inverse_nminus1",
        [](const Matrix& mat, const TolerancePolicy& p) {
            const auto c = closed_form_inverse_nminus1(mat, p);
            return py::make_tuple(c.b, c.negation_also_valid);
        },
        py::arg("m"), py::arg("policy") = TolerancePolicy{});
    m.def("compound_residual", &compound_residual);
}
