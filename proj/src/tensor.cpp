// SPDX-License-Identifier: MIT
#include "tucker/tensor.hpp"

#include "tucker/errors.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace tucker {

namespace {

using ConstMap = Eigen::Map<const Matrix>;
using MutMap = Eigen::Map<Matrix>;

void check_dims(const Dims& dims) {
    if (dims.empty()) throw ShapeError("tensor must have at least one mode");
    for (std::size_t n : dims)
        if (n == 0) throw ShapeError("tensor dimensions must be positive");
}

void check_mode(const DenseTensor& t, std::size_t mode) {
    if (mode >= t.order())
        throw ShapeError("mode " + std::to_string(mode) + " out of range for order-" +
                         std::to_string(t.order()) + " tensor");
}

// Sizes of the index blocks before and after `mode` in the linearization.
struct Split {
    std::size_t left;
    std::size_t n;
    std::size_t right;
};

Split split_at(const Dims& dims, std::size_t mode) {
    Split s{1, dims[mode], 1};
    for (std::size_t j = 0; j < mode; ++j) s.left *= dims[j];
    for (std::size_t j = mode + 1; j < dims.size(); ++j) s.right *= dims[j];
    return s;
}

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

} // namespace

std::size_t num_elements(std::span<const std::size_t> dims) noexcept {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

DenseTensor::DenseTensor() : dims_{1}, data_(1, 0.0) {}

DenseTensor::DenseTensor(Dims dims) : dims_(std::move(dims)) {
    check_dims(dims_);
    data_.assign(num_elements(dims_), 0.0);
}

DenseTensor::DenseTensor(Dims dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    check_dims(dims_);
    if (data_.size() != num_elements(dims_))
        throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                         " does not match dimensions (" + std::to_string(num_elements(dims_)) +
                         " expected)");
    for (double v : data_)
        if (!std::isfinite(v)) throw NumericError("tensor entries must be finite");
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
    std::vector<double> data(m.data(), m.data() + m.size());
    return DenseTensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                       std::move(data));
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
    if (index.size() != dims_.size()) throw ShapeError("index arity does not match tensor order");
    std::size_t off = 0;
    std::size_t stride = 1;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (index[i] >= dims_[i]) throw ShapeError("tensor index out of range");
        off += index[i] * stride;
        stride *= dims_[i];
    }
    return off;
}

double DenseTensor::operator()(std::span<const std::size_t> index) const {
    return data_[offset(index)];
}

Matrix DenseTensor::to_matrix() const {
    if (order() != 2) throw ShapeError("to_matrix requires an order-2 tensor");
    return ConstMap(data_.data(), idx(dims_[0]), idx(dims_[1]));
}

Matrix unfold(const DenseTensor& t, std::size_t mode) {
    check_mode(t, mode);
    const auto [left, n, right] = split_at(t.dims(), mode);
    Matrix m(idx(n), idx(left * right));
    const double* src = t.data().data();
    // offset = l + left*(k + n*r)  ->  column l + left*r
    for (std::size_t r = 0; r < right; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            const double* fiber = src + left * (k + n * r);
            for (std::size_t l = 0; l < left; ++l) m(idx(k), idx(l + left * r)) = fiber[l];
        }
    return m;
}

DenseTensor fold(const Matrix& m, const Dims& dims, std::size_t mode) {
    check_dims(dims);
    if (mode >= dims.size()) throw ShapeError("fold: mode out of range");
    const auto [left, n, right] = split_at(dims, mode);
    if (m.rows() != idx(n) || m.cols() != idx(left * right))
        throw ShapeError("fold: matrix shape does not match dimensions");
    DenseTensor t(dims);
    double* dst = t.mutable_data().data();
    for (std::size_t r = 0; r < right; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            double* fiber = dst + left * (k + n * r);
            for (std::size_t l = 0; l < left; ++l) fiber[l] = m(idx(k), idx(l + left * r));
        }
    return t;
}

DenseTensor mode_product(const DenseTensor& t, const Matrix& a, std::size_t mode) {
    check_mode(t, mode);
    const auto [left, n, right] = split_at(t.dims(), mode);
    if (a.cols() != idx(n))
        throw ShapeError("mode_product: matrix has " + std::to_string(a.cols()) +
                         " columns, mode " + std::to_string(mode) + " has dimension " +
                         std::to_string(n));
    const auto m = static_cast<std::size_t>(a.rows());
    if (m == 0) throw ShapeError("mode_product: matrix must have at least one row");
    Dims out_dims = t.dims();
    out_dims[mode] = m;
    DenseTensor out(out_dims);

    const double* src = t.data().data();
    double* dst = out.mutable_data().data();
    if (left == 1) {
        // The tensor is an n x right column-major matrix already.
        MutMap(dst, idx(m), idx(right)).noalias() = a * ConstMap(src, idx(n), idx(right));
    } else {
        // Each trailing slice is a left x n column-major block.
        for (std::size_t r = 0; r < right; ++r)
            MutMap(dst + r * left * m, idx(left), idx(m)).noalias() =
                ConstMap(src + r * left * n, idx(left), idx(n)) * a.transpose();
    }
    return out;
}

DenseTensor multi_mode_product_except(const DenseTensor& t, std::span<const Matrix> factors,
                                      std::size_t skip, Transpose transposed) {
    if (factors.size() != t.order())
        throw ShapeError("expected one factor per mode (" + std::to_string(t.order()) + "), got " +
                         std::to_string(factors.size()));
    DenseTensor out = t;
    for (std::size_t j = 0; j < t.order(); ++j) {
        if (j == skip) continue;
        if (transposed == Transpose::yes)
            out = mode_product(out, factors[j].transpose(), j);
        else
            out = mode_product(out, factors[j], j);
    }
    return out;
}

DenseTensor multi_mode_product(const DenseTensor& t, std::span<const Matrix> factors,
                               Transpose transposed) {
    return multi_mode_product_except(t, factors, t.order(), transposed);
}

double frobenius_norm(const DenseTensor& t) noexcept {
    const auto d = t.data();
    return Eigen::Map<const Vector>(d.data(), idx(d.size())).norm();
}

double inner(const DenseTensor& a, const DenseTensor& b) {
    if (a.dims() != b.dims()) throw ShapeError("inner: tensor dimensions differ");
    const auto x = a.data();
    const auto y = b.data();
    return Eigen::Map<const Vector>(x.data(), idx(x.size()))
        .dot(Eigen::Map<const Vector>(y.data(), idx(y.size())));
}

} // namespace tucker
