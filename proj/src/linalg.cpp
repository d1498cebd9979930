// SPDX-License-Identifier: MIT
#include "tucker/linalg.hpp"

#include "tucker/errors.hpp"

#include <lapacke.h>

#include <string>
#include <vector>

namespace tucker {

namespace {

constexpr double kSymmetryTolerance = 1e-10;

void check_symmetric(const Matrix& s, const char* who) {
    if (s.rows() != s.cols()) throw ShapeError(std::string(who) + ": matrix must be square");
    const double scale = std::max(s.cwiseAbs().maxCoeff(), 1.0);
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
        throw ShapeError(std::string(who) + ": matrix is not symmetric");
}

// Largest-magnitude entry positive; the first such entry wins ties.
void fix_signs(Matrix& v) {
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        Eigen::Index best = 0;
        double mag = -1.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, k)) > mag) {
                mag = std::abs(v(i, k));
                best = i;
            }
        }
        if (v(best, k) < 0.0) v.col(k) *= -1.0;
    }
}

// Eigenpairs with ascending indices [il, iu] (1-based, LAPACK convention) of
// the lower triangle of `a`, returned in descending order. `a` is destroyed.
EigenDecomposition syevr_range(Matrix& a, lapack_int il, lapack_int iu) {
    const auto n = static_cast<lapack_int>(a.rows());
    const lapack_int count = iu - il + 1;
    const char range = (il == 1 && iu == n) ? 'A' : 'I';
    Vector w(n);
    Matrix z(n, count);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(count, 1)));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', range, 'L', n, a.data(), n, 0.0,
                                           0.0, il, iu, 0.0, &found, w.data(), z.data(), n,
                                           support.data());
    if (info != 0 || found != count)
        throw NumericError("symmetric eigensolver failed (dsyevr info=" + std::to_string(info) + ")");

    EigenDecomposition out{Vector(count), Matrix(n, count)};
    for (lapack_int k = 0; k < count; ++k) {
        out.values(k) = w(count - 1 - k);
        out.vectors.col(k) = z.col(count - 1 - k);
    }
    fix_signs(out.vectors);
    return out;
}

} // namespace

QrFactors qf(const Matrix& m, double rank_tol) {
    const Eigen::Index n = m.rows();
    const Eigen::Index r = m.cols();
    if (r == 0 || n < r) throw ShapeError("qf: expected a tall matrix with n >= r >= 1");

    Eigen::HouseholderQR<Matrix> qr(m);
    QrFactors out;
    out.r = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    out.q = qr.householderQ() * Matrix::Identity(n, r);

    const double threshold = rank_tol * m.norm();
    for (Eigen::Index j = 0; j < r; ++j) {
        if (!(std::abs(out.r(j, j)) >= threshold) || out.r(j, j) == 0.0)
            throw RankDeficiencyError("qf: matrix is numerically rank deficient (column " +
                                      std::to_string(j) + ")");
        if (out.r(j, j) < 0.0) {
            out.q.col(j) *= -1.0;
            out.r.row(j) *= -1.0;
        }
    }
    return out;
}

Matrix sym(const Matrix& s) {
    if (s.rows() != s.cols()) throw ShapeError("sym: matrix must be square");
    return 0.5 * (s + s.transpose());
}

EigenDecomposition sym_eig(const Matrix& s) {
    check_symmetric(s, "sym_eig");
    if (s.rows() == 0) throw ShapeError("sym_eig: empty matrix");
    Matrix a = s;
    const auto n = static_cast<lapack_int>(s.rows());
    return syevr_range(a, 1, n);
}

Matrix dominant_subspace(const Matrix& m, Eigen::Index r) {
    const Eigen::Index n = m.rows();
    if (r < 1 || r > std::min(n, m.cols()))
        throw ShapeError("dominant_subspace: rank " + std::to_string(r) +
                         " must lie in [1, min(rows, cols)]");
    Matrix gram = Matrix::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
    const auto nn = static_cast<lapack_int>(n);
    return syevr_range(gram, nn - static_cast<lapack_int>(r) + 1, nn).vectors;
}

Matrix solve_lyapunov(const Matrix& lam, const Matrix& c) {
    check_symmetric(lam, "solve_lyapunov");
    check_symmetric(c, "solve_lyapunov");
    if (lam.rows() != c.rows()) throw ShapeError("solve_lyapunov: size mismatch");
    const auto eig = sym_eig(lam);
    const double floor = 1e-12 * lam.trace() / static_cast<double>(lam.rows());
    if (!(eig.values.minCoeff() > floor) || !(lam.trace() > 0.0))
        throw NumericError("solve_lyapunov: lambda is not positive definite");

    const Matrix& q = eig.vectors;
    Matrix ct = q.transpose() * c * q;
    for (Eigen::Index i = 0; i < ct.rows(); ++i)
        for (Eigen::Index j = 0; j < ct.cols(); ++j) ct(i, j) /= eig.values(i) + eig.values(j);
    return sym(q * ct * q.transpose());
}

} // namespace tucker
