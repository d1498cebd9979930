// SPDX-License-Identifier: MIT
#pragma once

#include "tucker/tensor.hpp"

#include <cstdint>

namespace tucker {

/// Tolerance on max|U^T U - I| for a matrix to count as a point on St(n, r).
inline constexpr double kOrthonormalityTolerance = 1e-10;

/// A point on the Stiefel manifold St(n, r): an n x r matrix with
/// orthonormal columns. It also stands for its Grassmann class [U].
class StiefelPoint {
public:
    /// Throws ShapeError unless `u` is orthonormal within kOrthonormalityTolerance.
    explicit StiefelPoint(Matrix u);

    /// Q factor of qf(m); use to repair drift or to project an arbitrary full-rank matrix.
    [[nodiscard]] static StiefelPoint orthonormalize(const Matrix& m);

    [[nodiscard]] const Matrix& matrix() const noexcept { return u_; }
    [[nodiscard]] Eigen::Index n() const noexcept { return u_.rows(); }
    [[nodiscard]] Eigen::Index r() const noexcept { return u_.cols(); }

    /// max|U^T U - I|
    [[nodiscard]] double orthonormality_drift() const;

private:
    struct Trusted {};
    StiefelPoint(Matrix u, Trusted) : u_(std::move(u)) {}

    Matrix u_;
};

/// Least-squares multiplier estimate lambda_U = U^T Y Y^T U, which defines the metric <xi, eta lambda>.
struct MetricState {
    Matrix lam;
};

[[nodiscard]] StiefelPoint eye_stiefel(Eigen::Index n, Eigen::Index r);
/// Q factor of an n x r standard normal matrix drawn with `seed`.
[[nodiscard]] StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index r, std::uint64_t seed);

/// Z - U sym(U^T Z)
[[nodiscard]] Matrix proj_tangent_euclid(const StiefelPoint& u, const Matrix& z);

/// Forms the r x L product U^T Y first; never the n x n Gram matrix.
[[nodiscard]] MetricState lambda_of(const StiefelPoint& u, const Matrix& y);

/// trace(xi^T eta lambda)
[[nodiscard]] double metric_inner(const Matrix& xi, const Matrix& eta, const MetricState& lam);

/// Tangent projection that is orthogonal in the lambda metric:
/// Z - U S lambda^{-1}, where lambda S + S lambda = lambda (U^T Z + Z^T U) lambda.
[[nodiscard]] Matrix proj_tangent_precond(const StiefelPoint& u, const Matrix& z,
                                          const MetricState& lam);

enum class GradVariant {
    literal, ///< G + U, the update direction used by the algorithms
    metric,  ///< G lambda^{-1} + U
};

/// Preconditioned gradient of -1/2 ||U^T Y||^2 with G = -Y (Y^T U).
[[nodiscard]] Matrix precond_grad(const StiefelPoint& u, const Matrix& y,
                                  GradVariant variant = GradVariant::literal);

/// -(I - U U^T) Y Y^T U: the Riemannian gradient of -1/2 ||U^T Y||^2 under the Euclidean metric.
[[nodiscard]] Matrix euclid_reduced_grad(const StiefelPoint& u, const Matrix& y);

/// Q factor of qf(U - step * direction).
[[nodiscard]] StiefelPoint retract_qr(const StiefelPoint& u, const Matrix& direction, double step);

} // namespace tucker
