#include "gandist/fid.hpp"

#include <gtest/gtest.h>

#include "gandist/rng.hpp"
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

GaussianSummary isotropic_summary(Eigen::Index d, const Vector& mu, double sigma) {
    return GaussianSummary(mu, sigma * sigma * Matrix::Identity(d, d), 0);
}

TEST(Summarize, HandCase) {
    const FeatureSet fs(from_rows({{0, 0}, {2, 2}}), Role::Reference);
    const GaussianSummary summary = summarize(fs);
    EXPECT_TRUE(summary.mean().isApprox(Vector::Constant(2, 1.0)));
    EXPECT_TRUE(summary.cov().isApprox(from_rows({{2, 2}, {2, 2}})));
    EXPECT_EQ(summary.n_samples(), 2);
}

TEST(Summarize, MonteCarloCovarianceNearIdentity) {
    const auto spec = GaussianSpec::isotropic(8, 0.0, 1.0, 10000, 11);
    const GaussianSummary summary = summarize(sample_gaussian(spec));
    EXPECT_LE((summary.cov() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Summarize, ConstantDataHasZeroCovariance) {
    Matrix data = Matrix::Constant(5, 3, 2.5);
    FidConfig cfg;
    cfg.ddof = 0;
    const GaussianSummary summary = summarize(FeatureSet(std::move(data), Role::Reference), cfg);
    EXPECT_TRUE(summary.cov().isZero(0.0));
}

TEST(Summarize, InsufficientSamplesWithDdofOne) {
    const FeatureSet single(from_rows({{1, 2}}), Role::Reference);
    EXPECT_THROW(summarize(single), InputError);
}

TEST(FidScore, IdenticalSummariesAreExactlyZero) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Matrix cov = random_spd(6, 7000 + seed);
        Vector mu(6);
        SplitMix64 rng(derive_stream(seed, 0xf1d));
        for (Eigen::Index k = 0; k < 6; ++k) mu(k) = rng.next_unit();
        const GaussianSummary s(mu, cov, 100);
        const GaussianSummary t(mu, cov, 100);
        EXPECT_EQ(fid_score(s, t).value, 0.0);
    }
}

TEST(FidScore, IsotropicMeanShift) {
    Vector mu_ref = Vector::Zero(2);
    Vector mu_gen(2);
    mu_gen << 3.0, 4.0;
    FidConfig cfg;
    cfg.eps = 0.0;
    const double value =
        fid_score(isotropic_summary(2, mu_ref, 1.0), isotropic_summary(2, mu_gen, 1.0), cfg).value;
    EXPECT_NEAR(value, 25.0, 25.0 * 1e-10);
}

TEST(FidScore, IsotropicCovarianceGap) {
    FidConfig cfg;
    cfg.eps = 0.0;
    const double value = fid_score(isotropic_summary(4, Vector::Zero(4), 2.0),
                                   isotropic_summary(4, Vector::Zero(4), 1.0), cfg)
                             .value;
    EXPECT_NEAR(value, 4.0, 4.0 * 1e-10);
}

TEST(FidScore, ClosedFormAgreementOnRandomIsotropicSummaries) {
    FidConfig cfg;
    cfg.eps = 0.0;
    SplitMix64 rng(derive_stream(3, 0xc105ed));
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next_below(15));
        Vector mu_ref(d), mu_gen(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            mu_ref(k) = 4.0 * (rng.next_unit() - 0.5);
            mu_gen(k) = 4.0 * (rng.next_unit() - 0.5);
        }
        const double sr = 0.5 + 2.0 * rng.next_unit();
        const double sg = 0.5 + 2.0 * rng.next_unit();
        const double expected =
            (mu_ref - mu_gen).squaredNorm() + static_cast<double>(d) * (sr - sg) * (sr - sg);
        const double value =
            fid_score(isotropic_summary(d, mu_ref, sr), isotropic_summary(d, mu_gen, sg), cfg)
                .value;
        EXPECT_NEAR(value, expected, expected * 1e-10 + 1e-12);
    }
}

TEST(FidScore, SymmetricInArguments) {
    SplitMix64 rng(derive_stream(4, 0x5f3));
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(trial % 6);
        Vector mu_a(d), mu_b(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            mu_a(k) = 3.0 * (rng.next_unit() - 0.5);
            mu_b(k) = 3.0 * (rng.next_unit() - 0.5);
        }
        const GaussianSummary a(mu_a, random_spd(d, 7600 + trial * 2), 50);
        const GaussianSummary b(mu_b, random_spd(d, 7601 + trial * 2), 50);
        const double ab = fid_score(a, b).value;
        const double ba = fid_score(b, a).value;
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(std::abs(ab - ba) / std::max(ab, ba), 1e-9);
    }
}

TEST(FidScore, EpsPerturbationIsSmallOnWellConditionedInputs) {
    // Smallest eigenvalue >= 0.1 by construction.
    const Matrix cov_ref = random_spd(5, 811) + 0.1 * Matrix::Identity(5, 5);
    const Matrix cov_gen = random_spd(5, 812) + 0.1 * Matrix::Identity(5, 5);
    Vector mu_gen = Vector::Zero(5);
    mu_gen(0) = 1.0;
    const GaussianSummary ref(Vector::Zero(5), cov_ref, 100);
    const GaussianSummary gen(mu_gen, cov_gen, 100);
    FidConfig with_eps;
    FidConfig without_eps;
    without_eps.eps = 0.0;
    EXPECT_LE(std::abs(fid_score(ref, gen, with_eps).value -
                       fid_score(ref, gen, without_eps).value),
              1e-3);
}

TEST(FidScore, DimensionMismatch) {
    EXPECT_THROW(fid_score(isotropic_summary(2, Vector::Zero(2), 1.0),
                           isotropic_summary(3, Vector::Zero(3), 1.0)),
                 InputError);
}

TEST(FidFromFeatures, SameMatrixIsExactlyZero) {
    const FeatureSet ref =
        sample_gaussian(GaussianSpec::isotropic(6, 0.5, 1.5, 200, 901), Role::Reference);
    const FeatureSet gen(ref.data(), Role::Generated);
    EXPECT_EQ(fid_from_features(ref, gen).value, 0.0);
}

TEST(FidFromFeatures, TranslationIdentity) {
    SplitMix64 rng(derive_stream(6, 0x7a5));
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        const Eigen::Index d = 3 + static_cast<Eigen::Index>(trial % 5);
        const FeatureSet ref = sample_gaussian(
            GaussianSpec::isotropic(d, 0.0, 1.0, 300, 950 + trial), Role::Reference);
        Vector v(d);
        for (Eigen::Index k = 0; k < d; ++k) v(k) = 2.0 * (rng.next_unit() - 0.5) + 0.5;
        const FeatureSet gen(ref.data().rowwise() + v.transpose(), Role::Generated);
        FidConfig cfg;
        cfg.eps = 0.0;
        const double value = fid_from_features(ref, gen, cfg).value;
        const double expected = v.squaredNorm();
        EXPECT_LE(std::abs(value - expected) / expected, 1e-9);
    }
}

TEST(FidFromFeatures, SampledPairMatchesClosedForm) {
    const auto spec_ref = GaussianSpec::isotropic(16, 0.0, 1.0, 20000, 2024);
    auto spec_gen = GaussianSpec::isotropic(16, 0.0, 1.0, 20000, 2025);
    spec_gen.mean(0) = 3.0;
    const double closed = closed_form_fid(spec_ref, spec_gen);  // 9
    const MetricScore score = fid_from_features(sample_gaussian(spec_ref, Role::Reference),
                                                sample_gaussian(spec_gen, Role::Generated));
    EXPECT_EQ(score.n_ref, 20000);
    EXPECT_EQ(score.n_gen, 20000);
    EXPECT_LE(std::abs(score.value - closed) / closed, 0.05);
}

TEST(FidFromFeatures, FacadesScaleSmoke) {
    // 606 samples of 64-d features, default eps; runs clean and finite.
    const FeatureSet ref =
        sample_gaussian(GaussianSpec::isotropic(64, 0.0, 1.0, 606, 15), Role::Reference);
    const FeatureSet gen =
        sample_gaussian(GaussianSpec::isotropic(64, 0.1, 1.1, 606, 16), Role::Generated);
    const MetricScore score = fid_from_features(ref, gen);
    EXPECT_TRUE(std::isfinite(score.value));
    EXPECT_GE(score.value, 0.0);
    EXPECT_FALSE(score.rank_deficient);
}

TEST(FidFromFeatures, FlagsRankDeficientCovariance) {
    const FeatureSet ref =
        sample_gaussian(GaussianSpec::isotropic(16, 0.0, 1.0, 10, 33), Role::Reference);
    const FeatureSet gen =
        sample_gaussian(GaussianSpec::isotropic(16, 0.0, 1.0, 64, 34), Role::Generated);
    const MetricScore score = fid_from_features(ref, gen);
    EXPECT_TRUE(score.rank_deficient);
    EXPECT_TRUE(std::isfinite(score.value));
}

TEST(FidFromFeatures, RoleMismatchWarnsAndProceeds) {
    const FeatureSet a =
        sample_gaussian(GaussianSpec::isotropic(4, 0.0, 1.0, 50, 41), Role::Generated);
    const FeatureSet b =
        sample_gaussian(GaussianSpec::isotropic(4, 0.0, 1.0, 50, 42), Role::Reference);
    std::vector<std::string> warnings;
    const MetricScore score = fid_from_features(a, b, FidConfig{}, &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("RoleMismatch"), std::string::npos);
    EXPECT_TRUE(std::isfinite(score.value));
}

TEST(FidFromFeatures, ScoreCarriesConfigDigest) {
    const FeatureSet ref =
        sample_gaussian(GaussianSpec::isotropic(4, 0.0, 1.0, 50, 51), Role::Reference);
    const FeatureSet gen =
        sample_gaussian(GaussianSpec::isotropic(4, 0.0, 1.0, 50, 52), Role::Generated);
    FidConfig cfg;
    EXPECT_EQ(fid_from_features(ref, gen, cfg).config_digest, cfg.digest());
    EXPECT_EQ(fid_from_features(ref, gen, cfg).kind, MetricKind::Fid);
}

}  // namespace
}  // namespace gandist
