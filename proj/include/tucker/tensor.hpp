// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace tucker {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

/// Product of all entries of `dims` (1 for an empty vector).
[[nodiscard]] std::size_t num_elements(std::span<const std::size_t> dims) noexcept;

/// Dense d-order tensor of doubles, first index varying fastest.
///
/// Element (k_0, ..., k_{d-1}) (0-based) lives at offset
/// sum_i k_i * prod_{j<i} n_j, so an order-2 tensor shares the memory
/// layout of a column-major matrix. Constructors reject empty or zero
/// dimensions, length mismatches and non-finite entries.
class DenseTensor {
public:
    /// 1-element zero tensor; exists so models and results stay default-constructible.
    DenseTensor();
    /// Zero tensor of the given shape.
    explicit DenseTensor(Dims dims);
    DenseTensor(Dims dims, std::vector<double> data);

    [[nodiscard]] static DenseTensor from_matrix(const Matrix& m);

    [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }
    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    /// Raw access for kernels; callers must keep every entry finite.
    [[nodiscard]] std::span<double> mutable_data() noexcept { return data_; }

    [[nodiscard]] double operator()(std::span<const std::size_t> index) const;
    [[nodiscard]] std::size_t offset(std::span<const std::size_t> index) const;

    /// Order-2 tensors only.
    [[nodiscard]] Matrix to_matrix() const;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    Dims dims_;
    std::vector<double> data_;
};

/// Mode-`mode` matricization (0-based mode).
///
/// Row k holds the mode fibers with k in position `mode`; the remaining
/// indices enumerate columns with the lowest original mode varying
/// fastest, so unfold(t, 0) is vec(t) reshaped column-major.
[[nodiscard]] Matrix unfold(const DenseTensor& t, std::size_t mode);

/// Inverse of unfold: rebuilds a tensor of shape `dims` from its mode-`mode` unfolding.
[[nodiscard]] DenseTensor fold(const Matrix& m, const Dims& dims, std::size_t mode);

/// t x_mode a, with a of shape (m x dims[mode]); the result has dims[mode] replaced by m.
[[nodiscard]] DenseTensor mode_product(const DenseTensor& t, const Matrix& a, std::size_t mode);

enum class Transpose { no, yes };

/// Applies factors[j] (or factors[j]^T) along every mode j != skip, in
/// ascending j. Pass skip >= order to apply all modes.
[[nodiscard]] DenseTensor multi_mode_product_except(const DenseTensor& t,
                                                    std::span<const Matrix> factors,
                                                    std::size_t skip,
                                                    Transpose transposed);

[[nodiscard]] DenseTensor multi_mode_product(const DenseTensor& t,
                                             std::span<const Matrix> factors,
                                             Transpose transposed);

[[nodiscard]] double frobenius_norm(const DenseTensor& t) noexcept;
[[nodiscard]] double inner(const DenseTensor& a, const DenseTensor& b);

} // namespace tucker
