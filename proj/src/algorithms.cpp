// SPDX-License-Identifier: MIT
#include "tucker/algorithms.hpp"

#include "tucker/errors.hpp"
#include "tucker/linalg.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace tucker {

namespace {

class Stopwatch {
public:
    using clock = std::chrono::steady_clock;

    void resume() { started_ = clock::now(); }
    void pause() { total_ += clock::now() - started_; }
    [[nodiscard]] double seconds() const { return std::chrono::duration<double>(total_).count(); }

private:
    clock::time_point started_{};
    clock::duration total_{};
};

std::vector<Matrix> matrices_of(const std::vector<StiefelPoint>& points) {
    std::vector<Matrix> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.matrix());
    return out;
}

Eigen::Index as_index(std::size_t v) { return static_cast<Eigen::Index>(v); }

void check_finite(double e) {
    if (!std::isfinite(e)) throw NumericError("relative error became non-finite; the iteration diverged");
}

double initial_error(const DenseTensor& x, double norm_x, const std::vector<StiefelPoint>& factors) {
    const auto mats = matrices_of(factors);
    const double c = frobenius_norm(core_of(x, mats));
    return std::sqrt(std::max(0.0, norm_x * norm_x - c * c)) / norm_x;
}

// Per-mode work of one method. It updates `u` in place from the projected
// unfolding `y`, appends trace records, and returns the mode's final error.
struct ModeStep {
    int outer;
    int mode;
    double norm_x;
    Stopwatch& clock;
    ConvergenceTrace& trace;

    void record(int inner, double err) const {
        trace.records.push_back({outer, mode, inner, clock.seconds(), err});
    }
};

template <class Update>
DecomposeResult coordinate_loop(const DenseTensor& x, const DecomposeConfig& cfg,
                                InitialFactors init, Update&& update) {
    cfg.validate(x.dims());
    std::vector<StiefelPoint> factors = init ? std::move(*init) : init_factors(x, cfg);
    if (factors.size() != x.order()) throw ShapeError("expected one initial factor per mode");
    for (std::size_t i = 0; i < x.order(); ++i)
        if (factors[i].n() != as_index(x.dim(i)) || factors[i].r() != as_index(cfg.ranks[i]))
            throw ShapeError("initial factor " + std::to_string(i) + " has the wrong shape");

    const double norm_x = frobenius_norm(x);
    if (norm_x == 0.0) throw NumericError("cannot decompose a zero tensor");

    DecomposeResult result;
    ConvergenceTrace& trace = result.trace;
    Stopwatch clock;
    double previous = initial_error(x, norm_x, factors);
    trace.outer_errors.push_back(previous);

    for (int k = 1; k <= cfg.max_iter; ++k) {
        double grad_sum = 0.0;
        double err = previous;
        for (std::size_t i = 0; i < x.order(); ++i) {
            clock.resume();
            const DenseTensor projected =
                multi_mode_product_except(x, matrices_of(factors), i, Transpose::yes);
            const Matrix y = unfold(projected, i);
            clock.pause();

            grad_sum += euclid_reduced_grad(factors[i], y).norm();
            ModeStep step{k, static_cast<int>(i) + 1, norm_x, clock, trace};
            err = update(step, factors[i], y);
            check_finite(err);
        }
        trace.outer_errors.push_back(err);
        trace.grad_norms.push_back(grad_sum);
        trace.iterations = k;
        trace.final_rel_err = err;
        if (std::abs(err - previous) <= cfg.eps) {
            trace.converged = true;
            break;
        }
        previous = err;
    }
    trace.elapsed_s = clock.seconds();

    result.model.factors = matrices_of(factors);
    result.model.core = core_of(x, result.model.factors);
    return result;
}

std::vector<Matrix> hosvd_factors(const DenseTensor& x, const Dims& ranks) {
    std::vector<Matrix> factors;
    for (std::size_t i = 0; i < x.order(); ++i)
        factors.push_back(dominant_subspace(unfold(x, i), as_index(ranks[i])));
    return factors;
}

void check_ranks(const DenseTensor& x, const Dims& ranks) {
    if (ranks.size() != x.order())
        throw ShapeError("expected " + std::to_string(x.order()) + " ranks, got " +
                         std::to_string(ranks.size()));
    for (std::size_t i = 0; i < ranks.size(); ++i)
        if (ranks[i] < 1 || ranks[i] > x.dim(i))
            throw ShapeError("rank " + std::to_string(ranks[i]) + " of mode " + std::to_string(i + 1) +
                             " must lie in [1, " + std::to_string(x.dim(i)) + "]");
}

} // namespace

std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::rpcd: return "rpcd";
    case Method::rpcd_plus: return "rpcd-plus";
    case Method::hooi: return "hooi";
    case Method::hosvd: return "hosvd";
    case Method::st_hosvd: return "st-hosvd";
    case Method::euclid_cd: return "euclid-cd";
    }
    return "unknown";
}

std::string_view to_string(InitKind k) noexcept {
    switch (k) {
    case InitKind::eye: return "eye";
    case InitKind::random: return "random";
    case InitKind::hosvd: return "hosvd";
    }
    return "unknown";
}

Method parse_method(std::string_view s) {
    for (Method m : {Method::rpcd, Method::rpcd_plus, Method::hooi, Method::hosvd, Method::st_hosvd,
                     Method::euclid_cd})
        if (to_string(m) == s) return m;
    throw ShapeError("unknown method '" + std::string(s) + "'");
}

InitKind parse_init(std::string_view s) {
    for (InitKind k : {InitKind::eye, InitKind::random, InitKind::hosvd})
        if (to_string(k) == s) return k;
    throw ShapeError("unknown initialization '" + std::string(s) + "'");
}

void DecomposeConfig::validate(const Dims& dims) const {
    if (ranks.size() != dims.size())
        throw ShapeError("expected " + std::to_string(dims.size()) + " ranks, got " +
                         std::to_string(ranks.size()));
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (ranks[i] < 1 || ranks[i] > dims[i])
            throw ShapeError("rank " + std::to_string(ranks[i]) + " of mode " + std::to_string(i + 1) +
                             " must lie in [1, " + std::to_string(dims[i]) + "]");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ShapeError("step size must be positive");
    if (!(eps > 0.0)) throw ShapeError("eps must be positive");
    if (!(resolved_eps_inner() > 0.0)) throw ShapeError("eps_inner must be positive");
    if (max_iter < 1) throw ShapeError("max_iter must be at least 1");
    if (max_inner < 0) throw ShapeError("max_inner must be non-negative");
}

std::vector<StiefelPoint> init_factors(const DenseTensor& x, const DecomposeConfig& cfg) {
    cfg.validate(x.dims());
    std::vector<StiefelPoint> out;
    switch (cfg.init) {
    case InitKind::eye:
        for (std::size_t i = 0; i < x.order(); ++i)
            out.push_back(eye_stiefel(as_index(x.dim(i)), as_index(cfg.ranks[i])));
        break;
    case InitKind::random:
        for (std::size_t i = 0; i < x.order(); ++i)
            out.push_back(random_stiefel(as_index(x.dim(i)), as_index(cfg.ranks[i]), cfg.seed + i));
        break;
    case InitKind::hosvd:
        for (auto& f : hosvd_factors(x, cfg.ranks)) out.emplace_back(std::move(f));
        break;
    }
    return out;
}

StiefelPoint rpcd_block_update(const StiefelPoint& u, const Matrix& y, double alpha,
                               GradVariant variant) {
    return retract_qr(u, precond_grad(u, y, variant), alpha);
}

double top_singular_value_squared(const Matrix& y, int iterations) {
    if (y.cols() == 0) return 0.0;
    Vector v = Vector::Ones(y.cols()) / std::sqrt(static_cast<double>(y.cols()));
    for (int it = 0; it < iterations; ++it) {
        Vector w = y.transpose() * (y * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
    }
    return (y * v).squaredNorm();
}

DecomposeResult rpcd(const DenseTensor& x, const DecomposeConfig& cfg, InitialFactors init) {
    return coordinate_loop(x, cfg, std::move(init), [&](ModeStep& s, StiefelPoint& u, const Matrix& y) {
        s.clock.resume();
        u = rpcd_block_update(u, y, cfg.alpha, cfg.grad_variant);
        s.clock.pause();
        const double err = rel_error_fast(s.norm_x, y, u.matrix());
        s.record(0, err);
        return err;
    });
}

DecomposeResult rpcd_plus(const DenseTensor& x, const DecomposeConfig& cfg, InitialFactors init) {
    const double eps_inner = cfg.resolved_eps_inner();
    return coordinate_loop(x, cfg, std::move(init), [&](ModeStep& s, StiefelPoint& u, const Matrix& y) {
        // Inner-loop error evaluations are part of the timed work.
        s.clock.resume();
        double before = rel_error_fast(s.norm_x, y, u.matrix());
        u = rpcd_block_update(u, y, cfg.alpha, cfg.grad_variant);
        double err = rel_error_fast(s.norm_x, y, u.matrix());
        s.clock.pause();
        s.record(0, err);
        for (int inner = 1; inner <= cfg.max_inner && before - err >= eps_inner; ++inner) {
            s.clock.resume();
            before = err;
            u = rpcd_block_update(u, y, cfg.alpha, cfg.grad_variant);
            err = rel_error_fast(s.norm_x, y, u.matrix());
            s.clock.pause();
            check_finite(err);
            s.record(inner, err);
        }
        return err;
    });
}

DecomposeResult hooi(const DenseTensor& x, const DecomposeConfig& cfg, InitialFactors init) {
    return coordinate_loop(x, cfg, std::move(init), [&](ModeStep& s, StiefelPoint& u, const Matrix& y) {
        s.clock.resume();
        u = StiefelPoint(dominant_subspace(y, u.r()));
        s.clock.pause();
        const double err = rel_error_fast(s.norm_x, y, u.matrix());
        s.record(0, err);
        return err;
    });
}

DecomposeResult euclid_cd(const DenseTensor& x, const DecomposeConfig& cfg, InitialFactors init) {
    return coordinate_loop(x, cfg, std::move(init), [&](ModeStep& s, StiefelPoint& u, const Matrix& y) {
        s.clock.resume();
        const double sigma_sq = top_singular_value_squared(y);
        if (sigma_sq > 0.0) u = retract_qr(u, euclid_reduced_grad(u, y), cfg.alpha / sigma_sq);
        s.clock.pause();
        const double err = rel_error_fast(s.norm_x, y, u.matrix());
        s.record(0, err);
        return err;
    });
}

TuckerModel hosvd(const DenseTensor& x, const Dims& ranks) {
    check_ranks(x, ranks);
    TuckerModel m;
    m.factors = hosvd_factors(x, ranks);
    m.core = core_of(x, m.factors);
    return m;
}

TuckerModel st_hosvd(const DenseTensor& x, const Dims& ranks) {
    check_ranks(x, ranks);
    TuckerModel m;
    DenseTensor work = x;
    for (std::size_t i = 0; i < x.order(); ++i) {
        m.factors.push_back(dominant_subspace(unfold(work, i), as_index(ranks[i])));
        work = mode_product(work, m.factors.back().transpose(), i);
    }
    m.core = std::move(work);
    return m;
}

DecomposeResult decompose(const DenseTensor& x, const DecomposeConfig& cfg, InitialFactors init) {
    switch (cfg.method) {
    case Method::rpcd: return rpcd(x, cfg, std::move(init));
    case Method::rpcd_plus: return rpcd_plus(x, cfg, std::move(init));
    case Method::hooi: return hooi(x, cfg, std::move(init));
    case Method::euclid_cd: return euclid_cd(x, cfg, std::move(init));
    case Method::hosvd:
    case Method::st_hosvd: break;
    }

    cfg.validate(x.dims());
    const double norm_x = frobenius_norm(x);
    if (norm_x == 0.0) throw NumericError("cannot decompose a zero tensor");
    DecomposeResult result;
    const auto start = std::chrono::steady_clock::now();
    result.model = cfg.method == Method::hosvd ? hosvd(x, cfg.ranks) : st_hosvd(x, cfg.ranks);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double c = frobenius_norm(result.model.core);
    const double err = std::sqrt(std::max(0.0, norm_x * norm_x - c * c)) / norm_x;
    check_finite(err);
    auto& trace = result.trace;
    trace.records.push_back({1, static_cast<int>(x.order()), 0, elapsed, err});
    trace.outer_errors.push_back(err);
    trace.final_rel_err = err;
    trace.iterations = 1;
    trace.converged = true;
    trace.elapsed_s = elapsed;
    return result;
}

} // namespace tucker
