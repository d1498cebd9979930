// SPDX-License-Identifier: MIT
#pragma once

#include "tucker/tensor.hpp"

#include <vector>

namespace tucker {

/// Core tensor C (r_1 x ... x r_d) and factors U_i (n_i x r_i, orthonormal columns).
struct TuckerModel {
    DenseTensor core;
    std::vector<Matrix> factors;

    [[nodiscard]] Dims ranks() const;
    /// n_i of each factor, i.e. the shape of the reconstructed tensor.
    [[nodiscard]] Dims shape() const;
    /// Number of stored values: prod r_i + sum n_i r_i.
    [[nodiscard]] std::size_t storage_size() const;
};

/// X x_1 U_1^T ... x_d U_d^T
[[nodiscard]] DenseTensor core_of(const DenseTensor& x, std::span<const Matrix> factors);

/// C x_1 U_1 ... x_d U_d
[[nodiscard]] DenseTensor reconstruct(const TuckerModel& m);

/// ||x - reconstruct(m)||_F / ||x||_F. Throws NumericError for a zero tensor.
[[nodiscard]] double rel_error_exact(const DenseTensor& x, const TuckerModel& m);

/// sqrt(max(0, ||X||^2 - ||U^T Y||^2)) / ||X||, where y is the unfolding of
/// X projected on every other mode. Exact whenever all factors are orthonormal.
[[nodiscard]] double rel_error_fast(double norm_x, const Matrix& y_unfold, const Matrix& u);

} // namespace tucker
