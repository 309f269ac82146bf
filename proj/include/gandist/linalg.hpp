#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gandist/core.hpp"
#include "gandist/error.hpp"

namespace gandist {

/// Symmetric eigendecomposition, eigenvalues ascending, eigenvectors in
/// columns. Satisfies V^T V = I to 1e-9 and reconstructs A to
/// 1e-8 * (1 + max|A|).
struct EigDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;
};

namespace detail {

inline void require_symmetric(const Matrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw InputError(ErrorCode::DimensionMismatch,
                         std::string(who) + ": matrix must be square and non-empty");
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9 * scale) {
        throw NumericError(ErrorCode::NotSymmetric, std::string(who) + ": asymmetry " +
                                                        std::to_string(asym) + " exceeds 1e-9");
    }
}

}  // namespace detail

/// Arithmetic mean of the rows.
inline Vector sample_mean(const FeatureSet& fs) {
    return fs.data().colwise().mean().transpose();
}

/// Sample covariance with divisor (n - ddof). Two-pass (center, then
/// accumulate) and explicitly symmetrized, so downstream eigensolves never
/// see accumulation-order asymmetry.
inline Matrix sample_covariance(const FeatureSet& fs, int ddof = 1) {
    if (ddof != 0 && ddof != 1) throw InputError(ErrorCode::BadConfig, "ddof must be 0 or 1");
    const auto n = fs.rows();
    if (n <= ddof) {
        throw InputError(ErrorCode::InsufficientSamples,
                         "covariance with ddof=" + std::to_string(ddof) + " needs n > " +
                             std::to_string(ddof) + ", got n=" + std::to_string(n));
    }
    const Vector mu = sample_mean(fs);
    const Matrix centered = fs.data().rowwise() - mu.transpose();
    Matrix cov = Matrix::Zero(fs.dims(), fs.dims());
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                                   1.0 / static_cast<double>(n - ddof));
    cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
    cov = ((cov + cov.transpose()) * 0.5).eval();
    return cov;
}

inline EigDecomposition sym_eig(const Matrix& a) {
    detail::require_symmetric(a, "sym_eig");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericError(ErrorCode::NoConvergence, "symmetric eigensolver did not converge");
    }
    return EigDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

/// Symmetric PSD square root via eigendecomposition. Eigenvalues in
/// [-clamp_tol * max|lambda|, 0) are round-off and clamp to zero; anything
/// more negative is a genuinely indefinite input.
inline Matrix psd_sqrt(const Matrix& a, double clamp_tol = 1e-10) {
    EigDecomposition eig = sym_eig(a);
    const double lam_max = eig.eigenvalues.cwiseAbs().maxCoeff();
    const double floor = -clamp_tol * lam_max;
    Vector roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double lam = eig.eigenvalues(i);
        if (lam < floor) {
            throw NumericError(ErrorCode::IndefiniteMatrix,
                               "eigenvalue " + std::to_string(lam) + " below -" +
                                   std::to_string(clamp_tol) + " * " + std::to_string(lam_max));
        }
        roots(i) = lam > 0.0 ? std::sqrt(lam) : 0.0;
    }
    Matrix s = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.transpose();
    s = ((s + s.transpose()) * 0.5).eval();
    return s;
}

/// Tr((sigma_ref * sigma_gen)^{1/2}) for symmetric PSD inputs, computed as
/// Tr((S sigma_ref S)^{1/2}) with S = sigma_gen^{1/2}. The conjugated matrix
/// is symmetric PSD with the same sqrt-trace, so the whole computation stays
/// in real arithmetic.
inline double trace_sqrt_product(const Matrix& sigma_ref, const Matrix& sigma_gen,
                                 double clamp_tol = 1e-10) {
    detail::require_symmetric(sigma_ref, "trace_sqrt_product");
    detail::require_symmetric(sigma_gen, "trace_sqrt_product");
    if (sigma_ref.rows() != sigma_gen.rows()) {
        throw InputError(ErrorCode::DimensionMismatch,
                         "covariance dimensions differ: " + std::to_string(sigma_ref.rows()) +
                             " vs " + std::to_string(sigma_gen.rows()));
    }
    // Bit-identical inputs: Tr((A A)^{1/2}) = Tr(A) exactly. Keeping this an
    // identity rather than a numerical round trip is what makes
    // fid(X, X) = 0 exact.
    if ((sigma_ref.array() == sigma_gen.array()).all()) return sigma_ref.trace();

    const Matrix s = psd_sqrt(sigma_gen, clamp_tol);
    Matrix conjugated = s * sigma_ref * s;
    conjugated = ((conjugated + conjugated.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(conjugated, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError(ErrorCode::NoConvergence, "symmetric eigensolver did not converge");
    }
    const Vector& lam = solver.eigenvalues();
    const double lam_max = lam.cwiseAbs().maxCoeff();
    const double floor = -clamp_tol * lam_max;
    double total = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < floor) {
            throw NumericError(ErrorCode::IndefiniteMatrix,
                               "conjugated product has eigenvalue " + std::to_string(lam(i)));
        }
        if (lam(i) > 0.0) total += std::sqrt(lam(i));
    }
    return total;
}

}  // namespace gandist
