// SPDX-License-Identifier: MIT
#pragma once

#include "tucker/manifold.hpp"
#include "tucker/model.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace tucker {

enum class Method { rpcd, rpcd_plus, hooi, hosvd, st_hosvd, euclid_cd };
enum class InitKind { eye, random, hosvd };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] std::string_view to_string(InitKind k) noexcept;
/// Accepts the CLI spellings ("rpcd-plus", "st-hosvd", ...). Throws ShapeError otherwise.
[[nodiscard]] Method parse_method(std::string_view s);
[[nodiscard]] InitKind parse_init(std::string_view s);

struct DecomposeConfig {
    Dims ranks;
    Method method = Method::rpcd;
    /// Step size. For euclid-cd the actual step is alpha / sigma_1(Y_(i))^2.
    double alpha = 1.0;
    /// Outer stopping threshold on |E_k - E_{k-1}|.
    double eps = 1e-3;
    /// RPCD+ inner threshold; unset means eps / 10.
    std::optional<double> eps_inner;
    int max_iter = 100;
    int max_inner = 50;
    InitKind init = InitKind::random;
    std::uint64_t seed = 0;
    GradVariant grad_variant = GradVariant::literal;

    [[nodiscard]] double resolved_eps_inner() const { return eps_inner.value_or(eps / 10.0); }
    /// Throws ShapeError on invalid ranks or parameters for a tensor of shape `dims`.
    void validate(const Dims& dims) const;
};

/// One factor update. `outer` and `mode` are 1-based; `inner` is 0 for the
/// first update of a mode and counts the extra RPCD+ updates after it.
struct TraceRecord {
    int outer = 0;
    int mode = 0;
    int inner = 0;
    double elapsed_s = 0.0;
    double rel_err = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ConvergenceTrace {
    std::vector<TraceRecord> records;
    /// E_0 (initial factors), E_1, ..., one entry per completed outer iteration.
    std::vector<double> outer_errors;
    /// Per outer iteration: sum over modes of ||(I - U U^T) Y Y^T U||_F, each
    /// evaluated at the block's point just before it is updated.
    std::vector<double> grad_norms;
    double final_rel_err = 1.0;
    int iterations = 0;
    bool converged = false;
    /// Time spent in parameter updates (plus RPCD+ inner error checks).
    double elapsed_s = 0.0;
};

struct DecomposeResult {
    TuckerModel model;
    ConvergenceTrace trace;
};

/// eye: leading columns of I; random: random_stiefel(n_i, r_i, seed + i);
/// hosvd: the factors of hosvd(x, ranks).
[[nodiscard]] std::vector<StiefelPoint> init_factors(const DenseTensor& x, const DecomposeConfig& cfg);

/// U <- qf(U - alpha * precond_grad(U, Y)). With alpha = 1 and the literal
/// gradient this is exactly one orthogonal-iteration step qf(Y Y^T U).
[[nodiscard]] StiefelPoint rpcd_block_update(const StiefelPoint& u, const Matrix& y, double alpha,
                                             GradVariant variant = GradVariant::literal);

/// Estimate of sigma_1(y)^2 from `iterations` power steps on y^T y.
[[nodiscard]] double top_singular_value_squared(const Matrix& y, int iterations = 10);

using InitialFactors = std::optional<std::vector<StiefelPoint>>;

[[nodiscard]] DecomposeResult rpcd(const DenseTensor& x, const DecomposeConfig& cfg,
                                   InitialFactors init = {});
[[nodiscard]] DecomposeResult rpcd_plus(const DenseTensor& x, const DecomposeConfig& cfg,
                                        InitialFactors init = {});
[[nodiscard]] DecomposeResult hooi(const DenseTensor& x, const DecomposeConfig& cfg,
                                   InitialFactors init = {});
[[nodiscard]] DecomposeResult euclid_cd(const DenseTensor& x, const DecomposeConfig& cfg,
                                        InitialFactors init = {});

[[nodiscard]] TuckerModel hosvd(const DenseTensor& x, const Dims& ranks);
[[nodiscard]] TuckerModel st_hosvd(const DenseTensor& x, const Dims& ranks);

/// Dispatches on cfg.method. The one-shot methods report a single trace
/// record and iterations = 1.
[[nodiscard]] DecomposeResult decompose(const DenseTensor& x, const DecomposeConfig& cfg,
                                        InitialFactors init = {});

} // namespace tucker
