// SPDX-License-Identifier: MIT
#include "oracles.hpp"
#include "tucker/algorithms.hpp"
#include "tucker/errors.hpp"
#include "tucker/linalg.hpp"
#include "tucker/synth.hpp"

#include <gtest/gtest.h>

using namespace tucker;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

DenseTensor lowrank(Dims dims, Dims ranks, std::uint64_t seed) {
    return gen_lowrank({std::move(dims), std::move(ranks), SynthKind::lowrank, 0.0, seed});
}

DenseTensor noisy(Dims dims, Dims ranks, std::uint64_t seed, double level = 0.1) {
    return gen_noisy({std::move(dims), std::move(ranks), SynthKind::noisy, level, seed});
}

DecomposeConfig config(Method m, Dims ranks, std::uint64_t seed = 7) {
    DecomposeConfig cfg;
    cfg.method = m;
    cfg.ranks = std::move(ranks);
    cfg.seed = seed;
    return cfg;
}

Matrix projected_unfolding(const DenseTensor& x, const std::vector<Matrix>& factors, std::size_t mode) {
    return unfold(multi_mode_product_except(x, factors, mode, Transpose::yes), mode);
}

} // namespace

TEST(DecomposeConfig, Validation) {
    auto cfg = config(Method::rpcd, {2, 2});
    EXPECT_NO_THROW(cfg.validate({4, 4}));
    EXPECT_THROW(cfg.validate({4, 4, 4}), ShapeError);
    EXPECT_THROW(cfg.validate({4, 1}), ShapeError);
    cfg.eps = 0.0;
    EXPECT_THROW(cfg.validate({4, 4}), ShapeError);
    cfg.eps = 1e-3;
    EXPECT_DOUBLE_EQ(cfg.resolved_eps_inner(), 1e-4);
    cfg.alpha = -1.0;
    EXPECT_THROW(cfg.validate({4, 4}), ShapeError);
    EXPECT_EQ(parse_method("rpcd-plus"), Method::rpcd_plus);
    EXPECT_EQ(to_string(Method::st_hosvd), "st-hosvd");
    EXPECT_THROW((void)parse_method("newton"), ShapeError);
}

TEST(InitFactors, EyeRandomHosvd) {
    const auto x = lowrank({4, 4, 4}, {2, 2, 2}, 1);
    auto cfg = config(Method::rpcd, {2, 2, 2});
    cfg.init = InitKind::eye;
    for (const auto& f : init_factors(x, cfg)) EXPECT_EQ(f.matrix(), Matrix::Identity(4, 2));

    cfg.init = InitKind::random;
    const auto a = init_factors(x, cfg);
    const auto b = init_factors(x, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(a[i].matrix(), b[i].matrix());
        EXPECT_EQ(a[i].matrix(), random_stiefel(4, 2, cfg.seed + i).matrix());
    }

    const auto big = lowrank({12, 10, 8}, {3, 2, 4}, 2);
    auto hcfg = config(Method::rpcd, {3, 2, 4});
    hcfg.init = InitKind::hosvd;
    TuckerModel m;
    for (const auto& f : init_factors(big, hcfg)) m.factors.push_back(f.matrix());
    m.core = core_of(big, m.factors);
    EXPECT_LE(rel_error_exact(big, m), 1e-10);

    cfg.ranks = {5, 2, 2};
    EXPECT_THROW((void)init_factors(x, cfg), ShapeError);
}

TEST(RelError, FastExamples) {
    const auto x = lowrank({6, 5, 4}, {2, 2, 2}, 3);
    const double nx = frobenius_norm(x);
    const TuckerModel truth = lowrank_model({{6, 5, 4}, {2, 2, 2}, SynthKind::lowrank, 0.0, 3});
    const Matrix y = projected_unfolding(x, truth.factors, 2);
    EXPECT_LE(rel_error_fast(nx, y, truth.factors[2]), 1e-7);

    // Columns orthogonal to the data's mode-3 span capture nothing.
    const Matrix& u3 = truth.factors[2];
    const Matrix perp = qf((Matrix::Identity(4, 4) - u3 * u3.transpose()) * Matrix::Identity(4, 2)).q;
    EXPECT_DOUBLE_EQ(rel_error_fast(nx, y, perp), 1.0);
    EXPECT_THROW((void)rel_error_fast(0.0, y, u3), NumericError);
}

TEST(RelError, FastMatchesExactOnRandomInstances) {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = oracle::random_tensor({6, 5, 7}, gen);
        std::vector<Matrix> f{oracle::random_orthonormal(6, 2, gen), oracle::random_orthonormal(5, 3, gen),
                              oracle::random_orthonormal(7, 2, gen)};
        const TuckerModel m{core_of(x, f), f};
        const double exact = rel_error_exact(x, m);
        for (std::size_t mode = 0; mode < 3; ++mode)
            EXPECT_NEAR(rel_error_fast(frobenius_norm(x), projected_unfolding(x, f, mode), f[mode]), exact, 1e-8);
        const double c = frobenius_norm(m.core);
        const double nx = frobenius_norm(x);
        EXPECT_NEAR(exact, std::sqrt(nx * nx - c * c) / nx, 1e-8);
    }
}

TEST(RelError, ExactExamples) {
    std::mt19937_64 gen(5);
    const auto x = oracle::random_tensor({3, 4, 2}, gen);
    const std::vector<Matrix> eye{Matrix::Identity(3, 3), Matrix::Identity(4, 4), Matrix::Identity(2, 2)};
    TuckerModel m{core_of(x, eye), eye};
    EXPECT_EQ(m.core, x);
    EXPECT_EQ(reconstruct(m), x);
    EXPECT_LE(rel_error_exact(x, m), 1e-12);
    m.core = DenseTensor({3, 4, 2});
    EXPECT_DOUBLE_EQ(rel_error_exact(x, m), 1.0);
    EXPECT_THROW((void)rel_error_exact(DenseTensor({3, 4, 2}), m), NumericError);
}

TEST(CoreOf, ProjectorFixedPointAndNonexpansive) {
    const TuckerModel truth = lowrank_model({{7, 6, 5}, {3, 2, 2}, SynthKind::lowrank, 0.0, 9});
    const auto x = reconstruct(truth);
    const auto back = reconstruct({core_of(x, truth.factors), truth.factors});
    EXPECT_LE(oracle::rel_diff(unfold(back, 0), unfold(x, 0)), 1e-12);

    std::mt19937_64 gen(6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto r = oracle::random_tensor({7, 6, 5}, gen);
        std::vector<Matrix> f{oracle::random_orthonormal(7, 3, gen), oracle::random_orthonormal(6, 2, gen),
                              oracle::random_orthonormal(5, 4, gen)};
        EXPECT_LE(frobenius_norm(core_of(r, f)), frobenius_norm(r) + 1e-12);
    }
}

TEST(Rpcd, RecoversExactLowRank) {
    const auto x = lowrank({100, 100, 100}, {5, 5, 5}, 42);
    auto cfg = config(Method::rpcd, {5, 5, 5});
    const auto res = rpcd(x, cfg);
    EXPECT_LE(res.trace.final_rel_err, 1e-6);
    EXPECT_TRUE(res.trace.converged);
    EXPECT_LE(rel_error_exact(x, res.model), 1e-6);
    EXPECT_EQ(res.model.core.dims(), (Dims{5, 5, 5}));
    EXPECT_EQ(res.model.storage_size(), 125u + 3u * 100u * 5u);
}

TEST(Rpcd, StationaryStartConvergesInOneIteration) {
    // Core supported on the leading indices: X lies in the span of eye factors.
    std::mt19937_64 gen(7);
    const auto core = oracle::random_tensor({2, 2, 2}, gen);
    const std::vector<Matrix> eye(3, Matrix::Identity(6, 2));
    const auto x = reconstruct({core, eye});
    auto cfg = config(Method::rpcd, {2, 2, 2});
    cfg.init = InitKind::eye;
    const auto res = rpcd(x, cfg);
    EXPECT_EQ(res.trace.iterations, 1);
    EXPECT_TRUE(res.trace.converged);
    EXPECT_LE(res.trace.final_rel_err, 1e-7);
    EXPECT_LE(rel_error_exact(x, res.model), 1e-12);
}

TEST(Rpcd, UnitStepIsOrthogonalIteration) {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix y = oracle::random_matrix(20, 15, gen);
        const StiefelPoint u(oracle::random_orthonormal(20, 4, gen));
        const Matrix expected = qf(y * (y.transpose() * u.matrix())).q;
        EXPECT_LE(max_abs(rpcd_block_update(u, y, 1.0).matrix() - expected), 1e-10);
    }
}

TEST(Rpcd, MonotoneErrorWithUnitStep) {
    const auto x = noisy({30, 25, 20}, {4, 3, 3}, 11);
    auto cfg = config(Method::rpcd, {4, 3, 3});
    cfg.eps = 1e-12;
    cfg.max_iter = 30;
    const auto res = rpcd(x, cfg);
    const auto& e = res.trace.outer_errors;
    for (std::size_t k = 1; k < e.size(); ++k) EXPECT_LE(e[k], e[k - 1] + 1e-10);
    // Per-update records are monotone as well.
    for (std::size_t k = 1; k < res.trace.records.size(); ++k)
        EXPECT_LE(res.trace.records[k].rel_err, res.trace.records[k - 1].rel_err + 1e-10);
}

TEST(Rpcd, GrassmannInvariantTrace) {
    const auto x = noisy({20, 18, 16}, {3, 3, 2}, 12);
    auto cfg = config(Method::rpcd, {3, 3, 2});
    cfg.eps = 1e-9;
    cfg.max_iter = 15;
    const auto base = init_factors(x, cfg);
    std::mt19937_64 gen(13);
    std::vector<StiefelPoint> rotated;
    for (const auto& f : base)
        rotated.emplace_back(f.matrix() * oracle::random_orthonormal(f.r(), f.r(), gen));
    const auto a = rpcd(x, cfg, base);
    const auto b = rpcd(x, cfg, rotated);
    ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
    for (std::size_t k = 0; k < a.trace.records.size(); ++k)
        EXPECT_NEAR(a.trace.records[k].rel_err, b.trace.records[k].rel_err, 1e-9);
}

TEST(Rpcd, GradientNormDecaysOnExactLowRank) {
    const auto x = lowrank({40, 40, 40}, {4, 4, 4}, 14);
    auto cfg = config(Method::rpcd, {4, 4, 4});
    cfg.eps = 1e-300;
    cfg.max_iter = 20;
    const auto res = rpcd(x, cfg);
    double best = std::numeric_limits<double>::infinity();
    for (double g : res.trace.grad_norms) best = std::min(best, g);
    EXPECT_LT(best, 1e-6);
}

TEST(Rpcd, TraceRecordsAreOrdered) {
    const auto x = noisy({15, 12, 10}, {3, 3, 3}, 15);
    const auto res = rpcd(x, config(Method::rpcd, {3, 3, 3}));
    ASSERT_EQ(res.trace.records.size(), static_cast<std::size_t>(3 * res.trace.iterations));
    for (std::size_t k = 0; k < res.trace.records.size(); ++k) {
        const auto& r = res.trace.records[k];
        EXPECT_EQ(r.outer, static_cast<int>(k / 3) + 1);
        EXPECT_EQ(r.mode, static_cast<int>(k % 3) + 1);
        EXPECT_EQ(r.inner, 0);
        if (k) EXPECT_GE(r.elapsed_s, res.trace.records[k - 1].elapsed_s);
    }
    EXPECT_EQ(res.trace.records.back().rel_err, res.trace.final_rel_err);
}

TEST(Rpcd, MetricGradientVariantAlsoConverges) {
    const auto x = lowrank({30, 30, 30}, {3, 3, 3}, 16);
    auto cfg = config(Method::rpcd, {3, 3, 3});
    cfg.grad_variant = GradVariant::metric;
    EXPECT_LE(rpcd(x, cfg).trace.final_rel_err, 1e-6);
}

TEST(RpcdPlus, NoInnerIterationsReproducesRpcd) {
    const auto x = noisy({25, 20, 15}, {3, 3, 3}, 17);
    auto cfg = config(Method::rpcd_plus, {3, 3, 3});
    cfg.max_inner = 0;
    const auto plus = rpcd_plus(x, cfg);
    const auto plain = rpcd(x, cfg);
    ASSERT_EQ(plus.trace.records.size(), plain.trace.records.size());
    for (std::size_t k = 0; k < plus.trace.records.size(); ++k) {
        auto a = plus.trace.records[k];
        auto b = plain.trace.records[k];
        a.elapsed_s = b.elapsed_s = 0.0;
        EXPECT_EQ(a, b);
    }
}

TEST(RpcdPlus, NoiseFloor) {
    const auto x = noisy({100, 100, 100}, {5, 5, 5}, 18);
    const auto res = rpcd_plus(x, config(Method::rpcd_plus, {5, 5, 5}));
    EXPECT_GE(res.trace.final_rel_err, 0.08);
    EXPECT_LE(res.trace.final_rel_err, 0.12);
}

TEST(RpcdPlus, InnerLoopReachesDominantSubspace) {
    const auto x = noisy({30, 25, 20}, {3, 3, 3}, 19, 0.05);
    auto cfg = config(Method::rpcd_plus, {3, 3, 3});
    cfg.eps_inner = 1e-15;
    cfg.max_inner = 500;
    cfg.max_iter = 1;
    const auto res = rpcd_plus(x, cfg);
    // After the last mode's inner loop, U_3 spans the dominant subspace of Y_(3).
    const auto& f = res.model.factors;
    const Matrix y = projected_unfolding(x, f, 2);
    EXPECT_LE(oracle::subspace_distance(f[2], dominant_subspace(y, 3)), 1e-4);
    bool saw_inner = false;
    for (const auto& r : res.trace.records) saw_inner = saw_inner || r.inner > 0;
    EXPECT_TRUE(saw_inner);
}

TEST(RpcdPlus, NeverWorseThanRpcd) {
    for (std::uint64_t seed : {20, 21, 22}) {
        const auto x = noisy({30, 30, 30}, {4, 4, 4}, seed);
        auto cfg = config(Method::rpcd, {4, 4, 4}, seed);
        const double plain = rpcd(x, cfg).trace.final_rel_err;
        const double plus = rpcd_plus(x, cfg).trace.final_rel_err;
        EXPECT_LE(plus, plain + 1e-9);
    }
}

TEST(Hooi, ExactLowRankWithinFiveIterations) {
    const auto x = lowrank({30, 25, 20}, {3, 4, 2}, 23);
    auto cfg = config(Method::hooi, {3, 4, 2});
    cfg.eps = 1e-12;
    cfg.max_iter = 5;
    const auto res = hooi(x, cfg);
    EXPECT_LE(res.trace.final_rel_err, 1e-8);
    EXPECT_LE(rel_error_exact(x, res.model), 1e-8);
}

TEST(Hooi, AgreesWithRpcdPlusOnNoisyData) {
    const auto x = noisy({100, 100, 100}, {5, 5, 5}, 24);
    const double h = hooi(x, config(Method::hooi, {5, 5, 5})).trace.final_rel_err;
    const double p = rpcd_plus(x, config(Method::rpcd_plus, {5, 5, 5})).trace.final_rel_err;
    EXPECT_NEAR(h, p, 1e-3);
}

TEST(Hooi, MatrixCaseMatchesTruncatedSvd) {
    std::mt19937_64 gen(25);
    const Matrix a = oracle::random_matrix(12, 9, gen);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix left = svd.matrixU().leftCols(3);
    const Matrix right = svd.matrixV().leftCols(3);

    auto cfg = config(Method::hooi, {3, 3});
    cfg.max_iter = 1;
    std::vector<StiefelPoint> init{random_stiefel(12, 3, 1), StiefelPoint(right)};
    const auto res = hooi(DenseTensor::from_matrix(a), cfg, init);
    EXPECT_LE(oracle::max_principal_angle(res.model.factors[0], left), 1e-8);
}

TEST(Hosvd, ExactOnLowRankAndShapes) {
    const auto x = lowrank({10, 9, 8}, {3, 2, 4}, 26);
    const auto a = hosvd(x, {3, 2, 4});
    const auto b = st_hosvd(x, {3, 2, 4});
    EXPECT_LE(rel_error_exact(x, a), 1e-10);
    EXPECT_LE(rel_error_exact(x, b), 1e-10);
    EXPECT_EQ(b.core.dims(), (Dims{3, 2, 4}));
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(b.factors[i].rows(), static_cast<Eigen::Index>(x.dim(i)));
        EXPECT_LE(max_abs(b.factors[i].transpose() * b.factors[i] - Matrix::Identity(b.factors[i].cols(), b.factors[i].cols())), 1e-12);
    }
    EXPECT_THROW((void)hosvd(x, {11, 2, 2}), ShapeError);
}

TEST(Hosvd, SequentialTruncationShrinksTheWorkingTensor) {
    // The second factor of ST-HOSVD is the dominant subspace of the mode-1-projected tensor.
    std::mt19937_64 gen(27);
    const auto x = oracle::random_tensor({8, 7, 6}, gen);
    const auto m = st_hosvd(x, {3, 2, 2});
    const auto w1 = mode_product(x, m.factors[0].transpose(), 0);
    EXPECT_EQ(w1.dims(), (Dims{3, 7, 6}));
    EXPECT_LE(oracle::subspace_distance(m.factors[1], dominant_subspace(unfold(w1, 1), 2)), 1e-10);
    const auto w2 = mode_product(w1, m.factors[1].transpose(), 1);
    EXPECT_EQ(w2.dims(), (Dims{3, 2, 6}));
}

TEST(Hosvd, NoBetterThanHooiOnNoisyData) {
    const auto x = noisy({40, 35, 30}, {4, 4, 4}, 28);
    const double hs = rel_error_exact(x, hosvd(x, {4, 4, 4}));
    auto cfg = config(Method::hooi, {4, 4, 4});
    cfg.init = InitKind::hosvd;
    const double ho = hooi(x, cfg).trace.final_rel_err;
    EXPECT_GE(hs, ho - 1e-12);
}

TEST(Decompose, OneShotMethodsReportOneIteration) {
    const auto x = noisy({12, 10, 8}, {2, 2, 2}, 29);
    for (Method m : {Method::hosvd, Method::st_hosvd}) {
        const auto res = decompose(x, config(m, {2, 2, 2}));
        EXPECT_EQ(res.trace.iterations, 1);
        EXPECT_EQ(res.trace.records.size(), 1u);
        EXPECT_NEAR(res.trace.final_rel_err, rel_error_exact(x, res.model), 1e-8);
    }
}

TEST(EuclidCd, ZeroGradientLeavesFactorUnchanged) {
    const auto u = random_stiefel(7, 2, 3);
    EXPECT_LE(max_abs(euclid_reduced_grad(u, u.matrix())), 1e-15);
    EXPECT_LE(max_abs(retract_qr(u, euclid_reduced_grad(u, u.matrix()), 0.5).matrix() - u.matrix()), 1e-13);
}

TEST(EuclidCd, SlowerThanRpcdOnExactLowRank) {
    const auto x = lowrank({100, 100, 100}, {5, 5, 5}, 42);
    auto cfg = config(Method::euclid_cd, {5, 5, 5});
    cfg.eps = 1e-300;
    cfg.max_iter = 50;
    const double euclid = euclid_cd(x, cfg).trace.final_rel_err;
    cfg.method = Method::rpcd;
    const double pre = rpcd(x, cfg).trace.final_rel_err;
    EXPECT_GT(euclid, pre);
}

TEST(TopSingularValue, PowerIterationEstimate) {
    std::mt19937_64 gen(30);
    const Matrix y = oracle::random_matrix(20, 8, gen);
    Eigen::JacobiSVD<Matrix> svd(y);
    const double s1 = svd.singularValues()(0);
    const double est = top_singular_value_squared(y, 200);
    EXPECT_NEAR(est, s1 * s1, 1e-8 * s1 * s1);
    EXPECT_LE(top_singular_value_squared(y), s1 * s1 * (1 + 1e-12));
    EXPECT_EQ(top_singular_value_squared(Matrix::Zero(3, 2)), 0.0);
}
