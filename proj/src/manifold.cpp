// SPDX-License-Identifier: MIT
#include "tucker/manifold.hpp"

#include "tucker/errors.hpp"
#include "tucker/linalg.hpp"
#include "tucker/random.hpp"

#include <string>

namespace tucker {

namespace {

void check_same_shape(const StiefelPoint& u, const Matrix& z, const char* who) {
    if (z.rows() != u.n() || z.cols() != u.r())
        throw ShapeError(std::string(who) + ": expected a " + std::to_string(u.n()) + "x" +
                         std::to_string(u.r()) + " matrix");
}

void check_rows(const StiefelPoint& u, const Matrix& y, const char* who) {
    if (y.rows() != u.n())
        throw ShapeError(std::string(who) + ": data matrix must have " + std::to_string(u.n()) +
                         " rows");
}

// lambda^{-1} applied from the right: x * lam^{-1}.
Matrix right_solve(const Matrix& x, const Matrix& lam) {
    Eigen::LLT<Matrix> llt(lam);
    if (llt.info() != Eigen::Success)
        throw NumericError("metric matrix lambda is not positive definite");
    return llt.solve(x.transpose()).transpose();
}

} // namespace

StiefelPoint::StiefelPoint(Matrix u) : u_(std::move(u)) {
    if (u_.cols() == 0 || u_.rows() < u_.cols())
        throw ShapeError("Stiefel point must be n x r with n >= r >= 1");
    if (!(orthonormality_drift() <= kOrthonormalityTolerance))
        throw ShapeError("matrix columns are not orthonormal");
}

StiefelPoint StiefelPoint::orthonormalize(const Matrix& m) { return {qf(m).q, Trusted{}}; }

double StiefelPoint::orthonormality_drift() const {
    return (u_.transpose() * u_ - Matrix::Identity(u_.cols(), u_.cols())).cwiseAbs().maxCoeff();
}

StiefelPoint eye_stiefel(Eigen::Index n, Eigen::Index r) {
    if (r < 1 || r > n) throw ShapeError("eye_stiefel: need 1 <= r <= n");
    return StiefelPoint(Matrix::Identity(n, r));
}

StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index r, std::uint64_t seed) {
    if (r < 1 || r > n) throw ShapeError("random_stiefel: need 1 <= r <= n");
    return StiefelPoint::orthonormalize(standard_normal_matrix(n, r, seed));
}

Matrix proj_tangent_euclid(const StiefelPoint& u, const Matrix& z) {
    check_same_shape(u, z, "proj_tangent_euclid");
    const Matrix& x = u.matrix();
    return z - x * sym(x.transpose() * z);
}

MetricState lambda_of(const StiefelPoint& u, const Matrix& y) {
    check_rows(u, y, "lambda_of");
    const Matrix uy = u.matrix().transpose() * y;
    Matrix lam = uy * uy.transpose();
    return {sym(lam)};
}

double metric_inner(const Matrix& xi, const Matrix& eta, const MetricState& lam) {
    if (xi.rows() != eta.rows() || xi.cols() != eta.cols() || lam.lam.rows() != xi.cols() ||
        lam.lam.cols() != xi.cols())
        throw ShapeError("metric_inner: shape mismatch");
    return (xi.transpose() * (eta * lam.lam)).trace();
}

Matrix proj_tangent_precond(const StiefelPoint& u, const Matrix& z, const MetricState& lam) {
    check_same_shape(u, z, "proj_tangent_precond");
    if (lam.lam.rows() != u.r() || lam.lam.cols() != u.r())
        throw ShapeError("proj_tangent_precond: lambda must be r x r");
    const Matrix& x = u.matrix();
    const Matrix m = x.transpose() * z + z.transpose() * x;
    const Matrix s = solve_lyapunov(lam.lam, sym(lam.lam * m * lam.lam));
    return z - x * right_solve(s, lam.lam);
}

Matrix precond_grad(const StiefelPoint& u, const Matrix& y, GradVariant variant) {
    check_rows(u, y, "precond_grad");
    const Matrix& x = u.matrix();
    const Matrix ytu = y.transpose() * x;
    const Matrix g = -(y * ytu);
    if (variant == GradVariant::literal) return g + x;
    return right_solve(g, ytu.transpose() * ytu) + x;
}

Matrix euclid_reduced_grad(const StiefelPoint& u, const Matrix& y) {
    check_rows(u, y, "euclid_reduced_grad");
    const Matrix& x = u.matrix();
    const Matrix w = y * (y.transpose() * x);
    return -(w - x * (x.transpose() * w));
}

StiefelPoint retract_qr(const StiefelPoint& u, const Matrix& direction, double step) {
    check_same_shape(u, direction, "retract_qr");
    return StiefelPoint::orthonormalize(u.matrix() - step * direction);
}

} // namespace tucker
