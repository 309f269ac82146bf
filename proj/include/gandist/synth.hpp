#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gandist/core.hpp"
#include "gandist/error.hpp"
#include "gandist/rng.hpp"

namespace gandist {

/// Seeded diagonal-Gaussian sampling spec for fixtures and self-tests.
struct GaussianSpec {
    Vector mean;
    Vector sigma;  // per-dimension standard deviations
    std::int64_t n = 0;
    std::uint64_t seed = 0;

    static GaussianSpec isotropic(Eigen::Index d, double mean_value, double sigma_value,
                                  std::int64_t n, std::uint64_t seed) {
        return GaussianSpec{Vector::Constant(d, mean_value), Vector::Constant(d, sigma_value), n,
                            seed};
    }

    static GaussianSpec diagonal(Vector mean, Vector sigma, std::int64_t n, std::uint64_t seed) {
        return GaussianSpec{std::move(mean), std::move(sigma), n, seed};
    }

    void validate() const {
        if (mean.size() < 1 || sigma.size() != mean.size()) {
            throw InputError(ErrorCode::DimensionMismatch,
                             "mean and sigma sizes must match and be >= 1");
        }
        for (Eigen::Index k = 0; k < sigma.size(); ++k) {
            if (!(sigma(k) > 0.0)) {
                throw InputError(ErrorCode::BadConfig,
                                 "sigma[" + std::to_string(k) + "] must be > 0");
            }
        }
        if (n < 1) throw InputError(ErrorCode::BadConfig, "n must be >= 1");
    }
};

/// Draws n i.i.d. rows from N(mean, diag(sigma^2)). Bitwise deterministic in
/// the seed.
inline FeatureSet sample_gaussian(const GaussianSpec& spec, Role role = Role::Reference,
                                  std::string label = "") {
    spec.validate();
    SplitMix64 rng(derive_stream(spec.seed, stream_tag::kGaussian));
    Matrix data(spec.n, spec.mean.size());
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index k = 0; k < data.cols(); ++k) {
            data(i, k) = spec.mean(k) + spec.sigma(k) * rng.next_normal();
        }
    }
    return FeatureSet(std::move(data), role, std::move(label));
}

/// FID between two diagonal Gaussians in closed form:
/// |mu_a - mu_b|^2 + sum_k (sigma_a[k] - sigma_b[k])^2.
inline double closed_form_fid(const GaussianSpec& a, const GaussianSpec& b) {
    a.validate();
    b.validate();
    if (a.mean.size() != b.mean.size()) {
        throw InputError(ErrorCode::DimensionMismatch,
                         "specs have different dimensions: " + std::to_string(a.mean.size()) +
                             " vs " + std::to_string(b.mean.size()));
    }
    return (a.mean - b.mean).squaredNorm() + (a.sigma - b.sigma).squaredNorm();
}

namespace detail {

using LdMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Lower Cholesky factor in extended precision, tolerant of semidefinite
// input (zero pivots give zero columns). A clearly negative pivot means the
// matrix was not PSD.
inline LdMatrix psd_cholesky(const LdMatrix& a) {
    const Eigen::Index d = a.rows();
    long double scale = 0.0L;
    for (Eigen::Index i = 0; i < d; ++i) scale = std::max(scale, std::abs(a(i, i)));
    LdMatrix lower = LdMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        long double pivot = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
        if (pivot < -1e-10L * scale) {
            throw NumericError(ErrorCode::NonPositiveEigenvalue,
                               "Cholesky pivot is negative; input was not PSD");
        }
        if (pivot <= 1e-18L * scale) continue;  // semidefinite direction, column stays zero
        lower(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < d; ++i) {
            long double accum = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) accum -= lower(i, k) * lower(j, k);
            lower(i, j) = accum / lower(j, j);
        }
    }
    return lower;
}

// Householder reduction of a symmetric matrix to tridiagonal form
// (eigenvalues only; no back-transformation).
inline void tridiagonalize(LdMatrix m, std::vector<long double>& diag,
                           std::vector<long double>& off) {
    const Eigen::Index d = m.rows();
    diag.assign(static_cast<std::size_t>(d), 0.0L);
    off.assign(static_cast<std::size_t>(d > 0 ? d - 1 : 0), 0.0L);
    for (Eigen::Index k = 0; k + 2 < d; ++k) {
        const Eigen::Index len = d - k - 1;
        long double norm_sq = 0.0L;
        for (Eigen::Index i = 0; i < len; ++i) norm_sq += m(k + 1 + i, k) * m(k + 1 + i, k);
        const long double norm = std::sqrt(norm_sq);
        if (norm == 0.0L) {
            off[static_cast<std::size_t>(k)] = 0.0L;
            continue;
        }
        const long double head = m(k + 1, k);
        const long double alpha = head >= 0.0L ? -norm : norm;
        Eigen::Matrix<long double, Eigen::Dynamic, 1> v(len);
        for (Eigen::Index i = 0; i < len; ++i) v(i) = m(k + 1 + i, k);
        v(0) -= alpha;
        const long double v_norm = std::sqrt(v.squaredNorm());
        if (v_norm == 0.0L) {
            off[static_cast<std::size_t>(k)] = alpha;
            continue;
        }
        v /= v_norm;
        auto block = m.block(k + 1, k + 1, len, len);
        const Eigen::Matrix<long double, Eigen::Dynamic, 1> p = 2.0L * (block * v);
        const long double kappa = v.dot(p);
        block -= (p * v.transpose() + v * p.transpose() - 2.0L * kappa * v * v.transpose());
        m(k + 1, k) = alpha;
        off[static_cast<std::size_t>(k)] = alpha;
    }
    if (d > 1) off[static_cast<std::size_t>(d - 2)] = m(d - 1, d - 2);
    for (Eigen::Index i = 0; i < d; ++i) diag[static_cast<std::size_t>(i)] = m(i, i);
}

// Sturm-sequence count of eigenvalues below x for a symmetric tridiagonal
// matrix: the sign chain of the leading-principal-minor characteristic
// polynomials, evaluated by the standard scaled recurrence.
inline int sturm_count_below(const std::vector<long double>& diag,
                             const std::vector<long double>& off, long double x) {
    const long double tiny = 1e-4900L;
    int count = 0;
    long double q = diag[0] - x;
    if (q < 0.0L) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        long double denom = q;
        if (std::abs(denom) < tiny) denom = denom < 0.0L ? -tiny : tiny;
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if (q < 0.0L) ++count;
    }
    return count;
}

// All eigenvalues of the tridiagonal matrix, ascending, by bisection on the
// Sturm counts within the Gershgorin interval.
inline std::vector<long double> tridiagonal_eigenvalues(const std::vector<long double>& diag,
                                                        const std::vector<long double>& off) {
    const std::size_t d = diag.size();
    long double lo = diag[0];
    long double hi = diag[0];
    for (std::size_t i = 0; i < d; ++i) {
        const long double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0L) +
                                   (i + 1 < d ? std::abs(off[i]) : 0.0L);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    const long double pad = 1e-18L * std::max({std::abs(lo), std::abs(hi), 1.0L});
    lo -= pad;
    hi += pad;
    std::vector<long double> lambda(d);
    for (std::size_t j = 0; j < d; ++j) {
        long double a = lo;
        long double b = hi;
        for (int iter = 0; iter < 120; ++iter) {
            const long double mid = 0.5L * (a + b);
            if (mid == a || mid == b) break;
            if (sturm_count_below(diag, off, mid) <= static_cast<int>(j)) {
                a = mid;
            } else {
                b = mid;
            }
        }
        lambda[j] = 0.5L * (a + b);
    }
    return lambda;
}

}  // namespace detail

/// Brute-force Tr((sigma_ref * sigma_gen)^{1/2}) for d <= 8. Route: the
/// product's eigenvalues equal those of L^T sigma_ref L with sigma_gen =
/// L L^T (a Cholesky congruence, so non-PSD inputs surface as negative
/// pivots or negative eigenvalues), found by Householder tridiagonalization
/// plus Sturm-count bisection in extended precision. Deliberately shares no
/// code with the double-precision eigendecomposition route it cross-checks.
inline double brute_trace_sqrt_product(const Matrix& sigma_ref, const Matrix& sigma_gen) {
    if (sigma_ref.rows() != sigma_ref.cols() || sigma_gen.rows() != sigma_gen.cols() ||
        sigma_ref.rows() != sigma_gen.rows() || sigma_ref.rows() < 1) {
        throw InputError(ErrorCode::DimensionMismatch, "inputs must be square and equal-sized");
    }
    if (sigma_ref.rows() > 8) {
        throw InputError(ErrorCode::DimensionMismatch, "brute oracle supports d <= 8");
    }
    const Eigen::Index d = sigma_ref.rows();
    const detail::LdMatrix lower = detail::psd_cholesky(sigma_gen.cast<long double>());
    detail::LdMatrix conjugated =
        lower.transpose() * sigma_ref.cast<long double>() * lower;
    conjugated = ((conjugated + conjugated.transpose()) * 0.5L).eval();

    std::vector<long double> diag;
    std::vector<long double> off;
    if (d == 1) {
        diag.assign(1, conjugated(0, 0));
    } else {
        detail::tridiagonalize(conjugated, diag, off);
    }
    const std::vector<long double> lambda = detail::tridiagonal_eigenvalues(diag, off);

    long double lam_max = 0.0L;
    for (const long double value : lambda) lam_max = std::max(lam_max, std::abs(value));
    long double total = 0.0L;
    for (const long double value : lambda) {
        if (value < -1e-8L * lam_max) {
            throw NumericError(ErrorCode::NonPositiveEigenvalue,
                               "product has a negative eigenvalue; inputs were not both PSD");
        }
        if (value > 0.0L) total += std::sqrt(value);
    }
    return static_cast<double>(total);
}

/// Seeded random SPD matrix Q D Q^T with Q orthogonal (QR of a Gaussian
/// matrix) and D log-uniform in [1e-3, 1e3], i.e. condition number <= 1e6.
inline Matrix random_spd(Eigen::Index d, std::uint64_t seed) {
    SplitMix64 rng(derive_stream(seed, stream_tag::kSpd));
    Matrix gauss(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) gauss(i, j) = rng.next_normal();
    }
    const Matrix q = Eigen::HouseholderQR<Matrix>(gauss).householderQ();
    Vector lambda(d);
    for (Eigen::Index i = 0; i < d; ++i) lambda(i) = std::pow(10.0, -3.0 + 6.0 * rng.next_unit());
    Matrix a = q * lambda.asDiagonal() * q.transpose();
    a = ((a + a.transpose()) * 0.5).eval();
    return a;
}

}  // namespace gandist
