// SPDX-License-Identifier: MIT
#pragma once

#include "tucker/tensor.hpp"

namespace tucker {

/// Relative threshold on |R_jj| (scaled by ||m||_F) below which qf reports rank deficiency.
inline constexpr double kRankTolerance = 1e-12;

struct QrFactors {
    Matrix q; ///< n x r, orthonormal columns
    Matrix r; ///< r x r, upper triangular, non-negative diagonal
};

/// Thin QR with the sign of each column chosen so that diag(R) >= 0.
///
/// With a strictly positive diagonal the factorization is unique, which is
/// what makes the Q factor usable as a retraction. Throws
/// RankDeficiencyError when some |R_jj| < rank_tol * ||m||_F.
[[nodiscard]] QrFactors qf(const Matrix& m, double rank_tol = kRankTolerance);

struct EigenDecomposition {
    Vector values;  ///< descending
    Matrix vectors; ///< column k pairs with values[k]
};

/// (s + s^T) / 2
[[nodiscard]] Matrix sym(const Matrix& s);

/// Full eigendecomposition of a symmetric matrix, eigenvalues descending.
/// Each eigenvector is signed so that its largest-magnitude entry is positive.
[[nodiscard]] EigenDecomposition sym_eig(const Matrix& s);

/// Top-r eigenvectors of m * m^T (the dominant r-dimensional left singular
/// subspace of m), computed from the dense n x n Gram matrix. Same sign
/// convention as sym_eig.
[[nodiscard]] Matrix dominant_subspace(const Matrix& m, Eigen::Index r);

/// Solves lam * S + S * lam = c for symmetric positive definite lam and symmetric c.
[[nodiscard]] Matrix solve_lyapunov(const Matrix& lam, const Matrix& c);

} // namespace tucker
