#include "gandist/linalg.hpp"

#include <gtest/gtest.h>

#include "gandist/synth.hpp"

namespace gandist {
namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(rows.begin()->size());
    Matrix m(n, d);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (const double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

TEST(SampleMean, HandCases) {
    const FeatureSet two(from_rows({{0, 0}, {2, 2}}), Role::Reference);
    EXPECT_TRUE(sample_mean(two).isApprox(Vector::Constant(2, 1.0)));

    const FeatureSet one(from_rows({{5, -3}}), Role::Reference);
    EXPECT_EQ(sample_mean(one)(0), 5.0);
    EXPECT_EQ(sample_mean(one)(1), -3.0);
}

TEST(SampleMean, MonteCarloAgainstSampler) {
    const auto spec = GaussianSpec::isotropic(4, 0.0, 1.0, 10000, 7);
    const Vector mu = sample_mean(sample_gaussian(spec));
    for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(mu(k), 0.0, 0.05);
}

TEST(SampleCovariance, HandCases) {
    const FeatureSet fs(from_rows({{0, 0}, {2, 2}}), Role::Reference);
    const Matrix unbiased = sample_covariance(fs, 1);
    EXPECT_TRUE(unbiased.isApprox(from_rows({{2, 2}, {2, 2}})));

    const Matrix biased = sample_covariance(fs, 0);
    EXPECT_TRUE((unbiased - 2.0 * biased).isZero(0.0));  // exact (n-1) vs n ratio

    const FeatureSet single(from_rows({{3, 4, 5}}), Role::Reference);
    EXPECT_TRUE(sample_covariance(single, 0).isZero(0.0));
}

TEST(SampleCovariance, InsufficientSamples) {
    const FeatureSet single(from_rows({{1, 2}}), Role::Reference);
    try {
        sample_covariance(single, 1);
        FAIL() << "expected InsufficientSamples";
    } catch (const InputError& err) {
        EXPECT_EQ(err.code(), ErrorCode::InsufficientSamples);
    }
}

TEST(SampleCovariance, ExactlySymmetric) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto spec = GaussianSpec::isotropic(7, 0.3, 2.0, 50, 100 + seed);
        const Matrix cov = sample_covariance(sample_gaussian(spec), 1);
        EXPECT_TRUE((cov - cov.transpose()).isZero(0.0));
    }
}

TEST(SymEig, IdentityAndDiagonal) {
    const EigDecomposition eye = sym_eig(Matrix::Identity(3, 3));
    EXPECT_TRUE(eye.eigenvalues.isApprox(Vector::Constant(3, 1.0)));

    const EigDecomposition diag = sym_eig(from_rows({{4, 0}, {0, 9}}));
    EXPECT_NEAR(diag.eigenvalues(0), 4.0, 1e-12);
    EXPECT_NEAR(diag.eigenvalues(1), 9.0, 1e-12);
    EXPECT_NEAR(std::abs(diag.eigenvectors(0, 0)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(diag.eigenvectors(1, 1)), 1.0, 1e-12);
}

TEST(SymEig, RandomReconstruction) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix a = random_spd(6, 500 + seed);
        const EigDecomposition eig = sym_eig(a);
        for (Eigen::Index i = 1; i < 6; ++i) {
            EXPECT_LE(eig.eigenvalues(i - 1), eig.eigenvalues(i));
        }
        const double ortho =
            (eig.eigenvectors.transpose() * eig.eigenvectors - Matrix::Identity(6, 6))
                .cwiseAbs()
                .maxCoeff();
        EXPECT_LE(ortho, 1e-9);
        const Matrix rebuilt =
            eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
        EXPECT_LE((rebuilt - a).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + a.cwiseAbs().maxCoeff()));
    }
}

TEST(SymEig, RejectsNonSymmetric) {
    try {
        sym_eig(from_rows({{0, 1}, {0, 0}}));
        FAIL() << "expected NotSymmetric";
    } catch (const NumericError& err) {
        EXPECT_EQ(err.code(), ErrorCode::NotSymmetric);
    }
}

TEST(PsdSqrt, HandCases) {
    EXPECT_TRUE(psd_sqrt(Matrix::Identity(4, 4)).isApprox(Matrix::Identity(4, 4)));
    EXPECT_TRUE(psd_sqrt(from_rows({{4, 0}, {0, 9}})).isApprox(from_rows({{2, 0}, {0, 3}})));
}

TEST(PsdSqrt, SquareBackRecoversInput) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix a = random_spd(5, 900 + seed);
        const Matrix s = psd_sqrt(a);
        EXPECT_TRUE((s - s.transpose()).isZero(0.0));
        const double rel = (s * s - a).norm() / a.norm();
        EXPECT_LE(rel, 1e-10);
    }
}

TEST(PsdSqrt, RejectsIndefinite) {
    try {
        psd_sqrt(from_rows({{1, 0}, {0, -1}}));
        FAIL() << "expected IndefiniteMatrix";
    } catch (const NumericError& err) {
        EXPECT_EQ(err.code(), ErrorCode::IndefiniteMatrix);
    }
}

TEST(TraceSqrtProduct, HandCases) {
    for (const Eigen::Index d : {1, 3, 6}) {
        EXPECT_NEAR(trace_sqrt_product(Matrix::Identity(d, d), Matrix::Identity(d, d)),
                    static_cast<double>(d), 1e-12);
    }
    Matrix four(1, 1), nine(1, 1);
    four << 4.0;
    nine << 9.0;
    EXPECT_NEAR(trace_sqrt_product(four, nine), 6.0, 1e-12);
}

TEST(TraceSqrtProduct, EqualArgumentsGiveExactTrace) {
    const Matrix a = random_spd(6, 321);
    const Matrix copy = a;
    EXPECT_EQ(trace_sqrt_product(a, copy), a.trace());  // bit-equal inputs take the exact path

    // A perturbed twin exercises the numerical path against the same value.
    Matrix nudged = a;
    nudged(0, 0) += 1e-13;
    nudged(1, 0) += 1e-13;
    nudged(0, 1) += 1e-13;
    const double rel = std::abs(trace_sqrt_product(a, nudged) - a.trace()) / a.trace();
    EXPECT_LE(rel, 1e-9);
}

TEST(TraceSqrtProduct, SymmetricInArguments) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 7);
        const Matrix a = random_spd(d, 1500 + seed * 2);
        const Matrix b = random_spd(d, 1501 + seed * 2);
        const double ab = trace_sqrt_product(a, b);
        const double ba = trace_sqrt_product(b, a);
        EXPECT_LE(std::abs(ab - ba) / std::max(std::abs(ab), std::abs(ba)), 1e-8);
    }
}

TEST(TraceSqrtProduct, MatchesBruteOracleAtSmallDimension) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix a = random_spd(3, 2600 + seed * 2);
        const Matrix b = random_spd(3, 2601 + seed * 2);
        const double fast = trace_sqrt_product(a, b);
        const double brute = brute_trace_sqrt_product(a, b);
        EXPECT_LE(std::abs(fast - brute) / std::abs(brute), 1e-8);
    }
}

TEST(TraceSqrtProduct, DimensionMismatch) {
    EXPECT_THROW(trace_sqrt_product(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), InputError);
}

}  // namespace
}  // namespace gandist
