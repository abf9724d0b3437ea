#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "tsh/pca.hpp"
#include "tsh/serialize.hpp"

using namespace tsh;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = g(rng);
    return m;
}

// Low-rank signal plus noise so the leading spectrum is well separated.
Eigen::MatrixXd structured_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d, Eigen::Index r)
{
    Eigen::MatrixXd scores = random_matrix(rng, n, r);
    for (Eigen::Index k = 0; k < r; ++k) scores.col(k) *= 10.0 * static_cast<double>(r - k);
    return scores * random_matrix(rng, r, d) + 0.1 * random_matrix(rng, n, d);
}

} // namespace

TEST(FitPca, ComponentsAreOrthonormal)
{
    std::mt19937_64 rng(1);
    auto x = random_matrix(rng, 40, 25);
    auto m = fit_pca(x, 10);
    ASSERT_EQ(m.n_components(), 10u);
    Eigen::MatrixXd gram = m.components * m.components.transpose();
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(FitPca, MeanProjectsToZero)
{
    std::mt19937_64 rng(2);
    auto x = random_matrix(rng, 30, 12);
    auto m = fit_pca(x, 5);
    EXPECT_LE(apply_pca(m, Eigen::VectorXd(m.mean)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(apply_pca(m, x).colwise().sum().cwiseAbs().maxCoeff(), 1e-9);
}

TEST(FitPca, ExplainedVarianceIsBoundedAndSorted)
{
    std::mt19937_64 rng(3);
    auto x = random_matrix(rng, 50, 20);
    auto m = fit_pca(x, 8);
    Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
    const double total = centred.squaredNorm() / 49.0;
    EXPECT_LE(m.explained_variance.sum(), total + 1e-9);
    for (Eigen::Index k = 1; k < m.explained_variance.size(); ++k)
        EXPECT_GE(m.explained_variance(k - 1), m.explained_variance(k));
    // Projected variance along each component equals its explained variance.
    Eigen::MatrixXd z = apply_pca(m, x);
    for (Eigen::Index k = 0; k < z.cols(); ++k) EXPECT_NEAR(z.col(k).squaredNorm() / 49.0, m.explained_variance(k), 1e-9);
}

TEST(FitPca, ClampsToRank)
{
    std::mt19937_64 rng(4);
    Eigen::VectorXd dir = random_matrix(rng, 1, 30).row(0).transpose();
    Eigen::MatrixXd x(20, 30);
    for (Eigen::Index i = 0; i < 20; ++i) x.row(i) = (static_cast<double>(i) * 0.3 - 1.0) * dir.transpose();
    auto m = fit_pca(x, 10);
    ASSERT_EQ(m.n_components(), 1u);
    EXPECT_NEAR(std::abs(m.components.row(0).dot(dir.normalized())), 1.0, 1e-12);

    // Also clamped to rows - 1.
    EXPECT_EQ(fit_pca(random_matrix(rng, 5, 30), 10).n_components(), 4u);
}

TEST(FitPca, FullRankReconstruction)
{
    std::mt19937_64 rng(5);
    auto x = random_matrix(rng, 30, 8);
    auto m = fit_pca(x, 8);
    ASSERT_EQ(m.n_components(), 8u);
    Eigen::MatrixXd back = (apply_pca(m, x) * m.components).rowwise() + m.mean.transpose();
    EXPECT_LE((back - x).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(FitPca, SignRule)
{
    std::mt19937_64 rng(6);
    auto m = fit_pca(random_matrix(rng, 25, 10), 6);
    for (Eigen::Index c = 0; c < m.components.rows(); ++c) {
        Eigen::Index arg = 0;
        m.components.row(c).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(m.components(c, arg), 0.0);
    }
}

TEST(FitPca, AgreesWithCovarianceEigendecomposition)
{
    std::mt19937_64 rng(7);
    auto x = structured_matrix(rng, 100, 500, 12);
    auto m = fit_pca(x, 10);
    ASSERT_EQ(m.n_components(), 10u);

    Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd cov = centred.transpose() * centred / 99.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    for (Eigen::Index k = 0; k < 10; ++k) {
        const Eigen::Index idx = 499 - k;
        Eigen::VectorXd v = eig.eigenvectors().col(idx);
        const double sign = v.dot(m.components.row(k)) < 0 ? -1.0 : 1.0;
        EXPECT_LE((sign * v - m.components.row(k).transpose()).cwiseAbs().maxCoeff(), 1e-6) << "component " << k;
        EXPECT_NEAR(m.explained_variance(k), eig.eigenvalues()(idx), 1e-6 * eig.eigenvalues()(idx));
    }
}

TEST(FitPca, InsufficientData)
{
    try {
        fit_pca(Eigen::MatrixXd::Ones(1, 4), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
    }
}

TEST(ApplyPca, RejectsWrongWidth)
{
    std::mt19937_64 rng(8);
    auto m = fit_pca(random_matrix(rng, 10, 6), 3);
    EXPECT_THROW(apply_pca(m, Eigen::VectorXd(Eigen::VectorXd::Zero(5))), Error);
}

TEST(PcaModelJson, RoundTrip)
{
    std::mt19937_64 rng(9);
    auto m = fit_pca(random_matrix(rng, 12, 7), 4);
    auto back = pca_model_from_json(json::parse(to_json(m).dump()));
    EXPECT_EQ(back.mean, m.mean);
    EXPECT_EQ(back.components, m.components);
    EXPECT_EQ(back.explained_variance, m.explained_variance);
}
