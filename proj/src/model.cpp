// SPDX-License-Identifier: MIT
#include "tucker/model.hpp"

#include "tucker/errors.hpp"

#include <cmath>

namespace tucker {

Dims TuckerModel::ranks() const {
    Dims r;
    for (const auto& f : factors) r.push_back(static_cast<std::size_t>(f.cols()));
    return r;
}

Dims TuckerModel::shape() const {
    Dims n;
    for (const auto& f : factors) n.push_back(static_cast<std::size_t>(f.rows()));
    return n;
}

std::size_t TuckerModel::storage_size() const {
    std::size_t total = core.size();
    for (const auto& f : factors) total += static_cast<std::size_t>(f.size());
    return total;
}

DenseTensor core_of(const DenseTensor& x, std::span<const Matrix> factors) {
    return multi_mode_product(x, factors, Transpose::yes);
}

DenseTensor reconstruct(const TuckerModel& m) {
    if (m.factors.size() != m.core.order())
        throw ShapeError("reconstruct: core order does not match factor count");
    return multi_mode_product(m.core, m.factors, Transpose::no);
}

double rel_error_exact(const DenseTensor& x, const TuckerModel& m) {
    const double nx = frobenius_norm(x);
    if (nx == 0.0) throw NumericError("relative error undefined for a zero tensor");
    const DenseTensor xhat = reconstruct(m);
    if (xhat.dims() != x.dims()) throw ShapeError("rel_error_exact: model shape differs from tensor");
    const auto a = x.data();
    const auto b = xhat.data();
    const Eigen::Map<const Vector> va(a.data(), static_cast<Eigen::Index>(a.size()));
    const Eigen::Map<const Vector> vb(b.data(), static_cast<Eigen::Index>(b.size()));
    return (va - vb).norm() / nx;
}

double rel_error_fast(double norm_x, const Matrix& y_unfold, const Matrix& u) {
    if (!(norm_x > 0.0)) throw NumericError("relative error undefined for a zero tensor");
    if (u.rows() != y_unfold.rows()) throw ShapeError("rel_error_fast: shape mismatch");
    const double captured = (u.transpose() * y_unfold).squaredNorm();
    return std::sqrt(std::max(0.0, norm_x * norm_x - captured)) / norm_x;
}

} // namespace tucker
