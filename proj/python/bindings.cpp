// SPDX-License-Identifier: MIT
// Python bindings. Tensors cross the boundary as Fortran-ordered float64
// arrays, which matches the first-index-fastest layout used internally.
#include "tucker/algorithms.hpp"
#include "tucker/errors.hpp"
#include "tucker/io.hpp"
#include "tucker/linalg.hpp"
#include "tucker/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace tucker;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

DenseTensor to_tensor(const FArray& a) {
    Dims dims(static_cast<std::size_t>(a.ndim()));
    for (std::size_t i = 0; i < dims.size(); ++i) dims[i] = static_cast<std::size_t>(a.shape(static_cast<py::ssize_t>(i)));
    return DenseTensor(std::move(dims), std::vector<double>(a.data(), a.data() + a.size()));
}

FArray to_array(const DenseTensor& t) {
    std::vector<py::ssize_t> shape(t.dims().begin(), t.dims().end());
    FArray out(shape);
    std::copy(t.data().begin(), t.data().end(), out.mutable_data());
    return out;
}

py::dict trace_dict(const ConvergenceTrace& t) {
    py::list records;
    for (const auto& r : t.records)
        records.append(py::make_tuple(r.outer, r.mode, r.inner, r.elapsed_s, r.rel_err));
    py::dict d;
    d["records"] = records;
    d["outer_errors"] = t.outer_errors;
    d["grad_norms"] = t.grad_norms;
    d["final_rel_err"] = t.final_rel_err;
    d["iterations"] = t.iterations;
    d["converged"] = t.converged;
    d["elapsed_s"] = t.elapsed_s;
    return d;
}

TuckerModel to_model(const FArray& core, const std::vector<Matrix>& factors) { return {to_tensor(core), factors}; }

} // namespace

PYBIND11_MODULE(_tucker, m) {
    m.doc() = "Tucker decomposition by Riemannian preconditioned coordinate descent";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<RankDeficiencyError>(m, "RankDeficiencyError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    m.def(
        "unfold", [](const FArray& t, std::size_t mode) { return unfold(to_tensor(t), mode); }, py::arg("tensor"),
        py::arg("mode"), "Mode-`mode` unfolding (0-based).");
    m.def(
        "fold", [](const Matrix& a, const Dims& dims, std::size_t mode) { return to_array(fold(a, dims, mode)); },
        py::arg("matrix"), py::arg("dims"), py::arg("mode"));
    m.def(
        "mode_product",
        [](const FArray& t, const Matrix& a, std::size_t mode) { return to_array(mode_product(to_tensor(t), a, mode)); },
        py::arg("tensor"), py::arg("matrix"), py::arg("mode"));

    m.def(
        "qf",
        [](const Matrix& a) {
            auto f = qf(a);
            return py::make_tuple(f.q, f.r);
        },
        py::arg("matrix"), "Thin QR with nonnegative diagonal R; returns (Q, R).");
    m.def("solve_lyapunov", &solve_lyapunov, py::arg("lam"), py::arg("c"));
    m.def(
        "rpcd_block_update",
        [](const Matrix& u, const Matrix& y, double alpha) {
            return rpcd_block_update(StiefelPoint(u), y, alpha).matrix();
        },
        py::arg("u"), py::arg("y"), py::arg("alpha") = 1.0);

    m.def(
        "synth",
        [](const Dims& dims, const Dims& ranks, const std::string& kind, double noise, std::uint64_t seed) {
            SynthKind k;
            if (kind == "lowrank")
                k = SynthKind::lowrank;
            else if (kind == "noisy")
                k = SynthKind::noisy;
            else
                throw ShapeError("unknown kind '" + kind + "'");
            SynthSpec spec{dims, ranks, k, noise, seed};
            spec.validate();
            return to_array(generate(spec));
        },
        py::arg("dims"), py::arg("ranks"), py::arg("kind") = "lowrank", py::arg("noise") = 0.1, py::arg("seed") = 0);

    m.def(
        "decompose",
        [](const FArray& x, const Dims& ranks, const std::string& method, double alpha, double eps,
           std::optional<double> eps_inner, int max_iter, int max_inner, const std::string& init, std::uint64_t seed) {
            DecomposeConfig cfg;
            cfg.ranks = ranks;
            cfg.method = parse_method(method);
            cfg.alpha = alpha;
            cfg.eps = eps;
            cfg.eps_inner = eps_inner;
            cfg.max_iter = max_iter;
            cfg.max_inner = max_inner;
            cfg.init = parse_init(init);
            cfg.seed = seed;
            const DenseTensor t = to_tensor(x);
            cfg.validate(t.dims());
            DecomposeResult res;
            {
                py::gil_scoped_release release;
                res = decompose(t, cfg);
            }
            return py::make_tuple(to_array(res.model.core), res.model.factors, trace_dict(res.trace));
        },
        py::arg("x"), py::arg("ranks"), py::arg("method") = "rpcd", py::arg("alpha") = 1.0, py::arg("eps") = 1e-3,
        py::arg("eps_inner") = py::none(), py::arg("max_iter") = 100, py::arg("max_inner") = 50,
        py::arg("init") = "random", py::arg("seed") = 0,
        "Returns (core, factors, trace) where trace is a dict of convergence data.");

    m.def(
        "reconstruct",
        [](const FArray& core, const std::vector<Matrix>& factors) { return to_array(reconstruct(to_model(core, factors))); },
        py::arg("core"), py::arg("factors"));
    m.def(
        "rel_error_exact",
        [](const FArray& x, const FArray& core, const std::vector<Matrix>& factors) {
            return rel_error_exact(to_tensor(x), to_model(core, factors));
        },
        py::arg("x"), py::arg("core"), py::arg("factors"));

    m.def(
        "read_dten", [](const std::filesystem::path& p) { return to_array(io::read_dten(p)); }, py::arg("path"));
    m.def(
        "write_dten", [](const std::filesystem::path& p, const FArray& t) { io::write_dten(p, to_tensor(t)); },
        py::arg("path"), py::arg("tensor"));
}
