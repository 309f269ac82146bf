#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gandist/core.hpp"
#include "gandist/error.hpp"
#include "gandist/linalg.hpp"

namespace gandist {

/// Gaussian moment summary of a feature set. No regularization happens here;
/// fid_score owns the eps*I shift so both covariances get the same treatment.
inline GaussianSummary summarize(const FeatureSet& fs, const FidConfig& cfg = {}) {
    cfg.validate();
    return GaussianSummary(sample_mean(fs), sample_covariance(fs, cfg.ddof), fs.rows());
}

namespace detail {

inline bool structurally_rank_deficient(const GaussianSummary& summary, int ddof) {
    return summary.n_samples() > 0 && summary.n_samples() - ddof < summary.dims();
}

}  // namespace detail

/// Frechet distance between two Gaussian summaries:
/// |mu_r - mu_g|^2 + Tr(S_r) + Tr(S_g) - 2 Tr((S_r S_g)^{1/2})
/// with S = Sigma + eps*I on both sides. Results in [-1e-8, 0) are round-off
/// and clamp to 0; anything more negative reports a numerics fault.
inline MetricScore fid_score(const GaussianSummary& ref, const GaussianSummary& gen,
                             const FidConfig& cfg = {}) {
    cfg.validate();
    if (ref.dims() != gen.dims()) {
        throw InputError(ErrorCode::DimensionMismatch,
                         "summary dimensions differ: " + std::to_string(ref.dims()) + " vs " +
                             std::to_string(gen.dims()));
    }
    const Eigen::Index d = ref.dims();
    const Matrix sigma_ref = ref.cov() + cfg.eps * Matrix::Identity(d, d);
    const Matrix sigma_gen = gen.cov() + cfg.eps * Matrix::Identity(d, d);

    double value = (ref.mean() - gen.mean()).squaredNorm() + sigma_ref.trace() +
                   sigma_gen.trace() - 2.0 * trace_sqrt_product(sigma_ref, sigma_gen);
    if (value < -1e-8) {
        throw NumericError(ErrorCode::InternalNumericalError,
                           "FID came out " + std::to_string(value) +
                               "; a squared distance this negative means broken numerics");
    }
    if (value < 0.0) value = 0.0;

    MetricScore score;
    score.kind = MetricKind::Fid;
    score.value = value;
    score.config_digest = cfg.digest();
    score.n_ref = ref.n_samples();
    score.n_gen = gen.n_samples();
    score.rank_deficient = detail::structurally_rank_deficient(ref, cfg.ddof) ||
                           detail::structurally_rank_deficient(gen, cfg.ddof);
    return score;
}

/// End-to-end FID over raw feature sets. Swapped or duplicated role tags are
/// reported as a warning and computation proceeds; FID is symmetric.
inline MetricScore fid_from_features(const FeatureSet& ref, const FeatureSet& gen,
                                     const FidConfig& cfg = {},
                                     std::vector<std::string>* warnings = nullptr) {
    if (ref.dims() != gen.dims()) {
        throw InputError(ErrorCode::DimensionMismatch,
                         "feature dimensions differ: " + std::to_string(ref.dims()) + " vs " +
                             std::to_string(gen.dims()));
    }
    if ((ref.role() != Role::Reference || gen.role() != Role::Generated) && warnings != nullptr) {
        warnings->push_back(std::string("RoleMismatch: expected (reference, generated), got (") +
                            to_string(ref.role()) + ", " + to_string(gen.role()) + ")");
    }
    return fid_score(summarize(ref, cfg), summarize(gen, cfg), cfg);
}

}  // namespace gandist
