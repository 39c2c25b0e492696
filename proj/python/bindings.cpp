#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sievespectra/errors.hpp"
#include "sievespectra/gram.hpp"
#include "sievespectra/latver.hpp"
#include "sievespectra/limit.hpp"
#include "sievespectra/ntheory.hpp"
#include "sievespectra/smooth.hpp"
#include "sievespectra/spectra.hpp"

namespace py = pybind11;
using namespace sievespectra;

PYBIND11_MODULE(sievespectra, m) {
    m.doc() = "Spectral laboratory for large-sieve Gram matrices over Farey fractions";

    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<resource_guard_error>(m, "ResourceGuardError", PyExc_RuntimeError);
    py::register_exception<convergence_error>(m, "ConvergenceError", PyExc_RuntimeError);

    // number theory
    m.def("farey_size", &farey_size, py::arg("Q"));
    m.def("totient", &totient, py::arg("n"));
    m.def("mobius", &mobius, py::arg("n"));
    m.def("mertens", &mertens, py::arg("x"));
    m.def("farey_exp_sum", &farey_exp_sum, py::arg("n"), py::arg("Q"));
    m.def(
        "farey_fractions",
        [](std::int64_t Q) {
            std::vector<std::pair<std::int64_t, std::int64_t>> out;
            for (const auto& f : farey_set(Q).fractions) out.emplace_back(f.a, f.q);
            return out;
        },
        py::arg("Q"), "Sorted reduced fractions a/q with 0 < a <= q <= Q, as (a, q) pairs");

    // gram
    py::class_<GramMatrix>(m, "GramMatrix")
        .def_readonly("Q", &GramMatrix::Q)
        .def_readonly("N", &GramMatrix::N)
        .def_readonly("first_row", &GramMatrix::first_row)
        .def("trace", &GramMatrix::trace)
        .def("to_dense", &GramMatrix::to_dense);
    m.def(
        "build_gram", [](std::int64_t Q, std::int64_t N) { return build_gram(Q, N); },
        py::arg("Q"), py::arg("N"));
    m.def(
        "build_dual_gram",
        [](std::int64_t Q, std::int64_t N) { return build_dual_gram(Q, N).entries; },
        py::arg("Q"), py::arg("N"), "Dense AA* matrix over F_Q");

    // spectra
    py::class_<MomentReport>(m, "MomentReport")
        .def_readonly("ell", &MomentReport::ell)
        .def_readonly("value", &MomentReport::value)
        .def_property_readonly("method",
                               [](const MomentReport& r) { return to_string(r.method); })
        .def_readonly("Q", &MomentReport::Q)
        .def_readonly("N", &MomentReport::N)
        .def_readonly("alpha", &MomentReport::alpha);
    m.def(
        "gram_eigenvalues",
        [](std::int64_t Q, std::int64_t N) { return eigenvalues(build_gram(Q, N)).eigenvalues; },
        py::arg("Q"), py::arg("N"), "Eigenvalues of A*A, descending");
    m.def(
        "moment",
        [](std::int64_t Q, std::int64_t N, int ell, const std::string& method) {
            const GramMatrix g = build_gram(Q, N);
            if (method == "spectral") return moment_spectral(eigenvalues(g), ell);
            if (method == "trace") return moment_trace(g, ell);
            if (method == "dual") return moment_dual(build_dual_gram(Q, N), ell);
            throw validation_error("method must be spectral|trace|dual");
        },
        py::arg("Q"), py::arg("N"), py::arg("ell"), py::arg("method") = "trace");

    // limit
    py::class_<QuadratureConfig>(m, "QuadratureConfig")
        .def(py::init<>())
        .def_readwrite("pair_tol", &QuadratureConfig::pair_tol)
        .def_readwrite("max_depth", &QuadratureConfig::max_depth)
        .def_readwrite("r_start", &QuadratureConfig::r_start)
        .def_readwrite("r_cap", &QuadratureConfig::r_cap)
        .def_readwrite("cauchy_tol", &QuadratureConfig::cauchy_tol)
        .def_readwrite("threads", &QuadratureConfig::threads);
    py::class_<LimitMomentResult>(m, "LimitMomentResult")
        .def_readonly("ell", &LimitMomentResult::ell)
        .def_readonly("alpha", &LimitMomentResult::alpha)
        .def_readonly("value", &LimitMomentResult::value)
        .def_readonly("r_final", &LimitMomentResult::r_final)
        .def_readonly("cauchy_gap", &LimitMomentResult::cauchy_gap)
        .def_readonly("converged", &LimitMomentResult::converged);
    m.def("sinc", &sinc, py::arg("x"));
    m.def("h_fn", &h_fn, py::arg("A"), py::arg("B"), py::arg("x"), py::arg("y"));
    m.def(
        "limit_moment",
        [](int ell, double alpha, const QuadratureConfig& cfg) {
            return limit_moment(ell, alpha, cfg);
        },
        py::arg("ell"), py::arg("alpha"), py::arg("cfg") = QuadratureConfig{});
    m.def("g2_scaled", &g2_scaled, py::arg("u"));
    m.def(
        "m2_via_g2",
        [](double alpha, double cutoff) {
            const M2Result r = m2_via_g2(alpha, cutoff);
            return std::make_pair(r.value, r.tail_bound);
        },
        py::arg("alpha"), py::arg("cutoff") = 1000.0, "Returns (value, tail_bound)");

    // smooth
    m.def("xi", &xi, py::arg("x"));
    m.def("f_delta", &f_delta, py::arg("x"), py::arg("delta"));
    m.def("fhat_delta", &fhat_delta, py::arg("u"), py::arg("delta"));
    m.def(
        "smoothed_moment",
        [](std::int64_t Q, std::int64_t N, int ell, double delta) {
            return smoothed_moment(Q, N, ell, delta);
        },
        py::arg("Q"), py::arg("N"), py::arg("ell"), py::arg("delta"));

    // latver
    m.def(
        "shell_tail",
        [](int ell, double alpha, std::int64_t R) { return shell_tail(ell, alpha, R); },
        py::arg("ell"), py::arg("alpha"), py::arg("R"));
    m.def(
        "enumerate_chain",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& boxes,
           const std::vector<std::int64_t>& D) {
            std::vector<Box> bs;
            for (auto [lo, hi] : boxes) bs.push_back({lo, hi});
            std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> out;
            for (const auto& c : enumerate_chain(bs, D)) out.emplace_back(c.A, c.B);
            return out;
        },
        py::arg("boxes"), py::arg("D"),
        "Chains (A_1,B_1,...) solving the determinant equations inside the boxes");
}
