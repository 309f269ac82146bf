#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "gandist/error.hpp"

namespace gandist {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Role { Reference, Generated };

inline const char* to_string(Role role) {
    return role == Role::Reference ? "reference" : "generated";
}

namespace detail {

// Scans row-major so the first offending entry is reported by (row, col).
inline void check_finite(const Matrix& data) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            if (!std::isfinite(data(i, j))) {
                throw InputError(ErrorCode::NonFinite,
                                 "non-finite value at row " + std::to_string(i) + ", col " +
                                     std::to_string(j));
            }
        }
    }
}

}  // namespace detail

/// One set of feature vectors (rows = samples). Immutable after construction;
/// the constructor enforces every invariant, so any live instance is valid.
class FeatureSet {
  public:
    FeatureSet(Matrix data, Role role, std::string label = "")
        : data_(std::move(data)), role_(role), label_(std::move(label)) {
        if (data_.rows() < 1 || data_.cols() < 1) {
            throw InputError(ErrorCode::EmptySet,
                             "feature set must be at least 1x1, got " +
                                 std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
        }
        detail::check_finite(data_);
    }

    const Matrix& data() const noexcept { return data_; }
    Role role() const noexcept { return role_; }
    const std::string& label() const noexcept { return label_; }
    Eigen::Index rows() const noexcept { return data_.rows(); }
    Eigen::Index dims() const noexcept { return data_.cols(); }

  private:
    Matrix data_;
    Role role_;
    std::string label_;
};

/// Validates a dense matrix as a feature set.
inline FeatureSet validate_feature_set(Matrix data, Role role = Role::Reference,
                                       std::string label = "") {
    return FeatureSet(std::move(data), role, std::move(label));
}

/// Validates nested rows (the ingestion shape where ragged input is possible).
inline FeatureSet validate_feature_set(const std::vector<std::vector<double>>& rows,
                                       Role role = Role::Reference, std::string label = "") {
    if (rows.empty() || rows.front().empty()) {
        throw InputError(ErrorCode::EmptySet, "no rows or empty rows");
    }
    const auto dims = static_cast<Eigen::Index>(rows.front().size());
    Matrix data(static_cast<Eigen::Index>(rows.size()), dims);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != dims) {
            throw InputError(ErrorCode::RaggedRows,
                             "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                 " values, expected " + std::to_string(dims));
        }
        for (Eigen::Index j = 0; j < dims; ++j) {
            data(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
        }
    }
    return FeatureSet(std::move(data), role, std::move(label));
}

/// Gaussian moment summary of a feature set: mean vector and covariance.
class GaussianSummary {
  public:
    GaussianSummary(Vector mean, Matrix cov, std::int64_t n_samples)
        : mean_(std::move(mean)), cov_(std::move(cov)), n_samples_(n_samples) {
        if (cov_.rows() != cov_.cols() || mean_.size() != cov_.rows()) {
            throw InputError(ErrorCode::DimensionMismatch,
                             "mean dimension " + std::to_string(mean_.size()) +
                                 " does not match covariance " + std::to_string(cov_.rows()) + "x" +
                                 std::to_string(cov_.cols()));
        }
        if (!mean_.allFinite() || !cov_.allFinite()) {
            throw InputError(ErrorCode::NonFinite, "summary contains NaN/Inf");
        }
        const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12) {
            throw InputError(ErrorCode::NotSymmetric,
                             "covariance asymmetry " + std::to_string(asym) + " exceeds 1e-12");
        }
    }

    const Vector& mean() const noexcept { return mean_; }
    const Matrix& cov() const noexcept { return cov_; }
    std::int64_t n_samples() const noexcept { return n_samples_; }
    Eigen::Index dims() const noexcept { return mean_.size(); }

  private:
    Vector mean_;
    Matrix cov_;
    std::int64_t n_samples_;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

// Hexfloat rendering is exact and locale-independent, so digests are stable
// across platforms for bit-identical configs.
inline std::string repr(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", value);
    return buf;
}

inline std::string hex64(std::uint64_t value) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace detail

struct FidConfig {
    double eps = 1e-6;  // added to both covariances as eps*I before the trace term
    int ddof = 1;       // covariance divisor n - ddof

    void validate() const {
        if (!(eps >= 0.0)) throw InputError(ErrorCode::BadConfig, "eps must be >= 0");
        if (ddof != 0 && ddof != 1) throw InputError(ErrorCode::BadConfig, "ddof must be 0 or 1");
    }

    std::string digest() const {
        return detail::hex64(detail::fnv1a64("fid|eps=" + detail::repr(eps) +
                                             "|ddof=" + std::to_string(ddof)));
    }
};

struct SidConfig {
    int order_m = 2;            // kernel order
    double side_r = 1.0;        // hypercube side, in transformed feature units
    int batches_n = 10;         // disjoint batch count N
    int test_points_mx = 128;   // test points per hypercube
    std::uint64_t seed = 0;     // master seed for shuffles and test points
    double kernel_eps = 1e-3;   // kernel regularizer
    bool standardize = true;    // per-dimension standardization fitted on the reference

    void validate() const {
        if (order_m < 1) throw InputError(ErrorCode::BadConfig, "order_m must be >= 1");
        if (!(side_r > 0.0)) throw InputError(ErrorCode::BadConfig, "side_r must be > 0");
        if (batches_n < 1) throw InputError(ErrorCode::BadConfig, "batches_n must be >= 1");
        if (test_points_mx < 1)
            throw InputError(ErrorCode::BadConfig, "test_points_mx must be >= 1");
        if (!(kernel_eps > 0.0)) throw InputError(ErrorCode::BadConfig, "kernel_eps must be > 0");
    }

    std::string digest() const {
        return detail::hex64(detail::fnv1a64(
            "sid|m=" + std::to_string(order_m) + "|r=" + detail::repr(side_r) +
            "|n=" + std::to_string(batches_n) + "|mx=" + std::to_string(test_points_mx) +
            "|seed=" + std::to_string(seed) + "|eps=" + detail::repr(kernel_eps) +
            "|std=" + (standardize ? "1" : "0")));
    }
};

enum class MetricKind { Fid, Sid };

inline const char* to_string(MetricKind kind) { return kind == MetricKind::Fid ? "fid" : "sid"; }

/// A named scalar result. FID values are clamped to [0, inf); SID values may
/// be any finite real.
struct MetricScore {
    MetricKind kind;
    double value = 0.0;
    std::string config_digest;
    std::int64_t n_ref = 0;
    std::int64_t n_gen = 0;
    // FID diagnostics: set when a sample covariance was structurally
    // rank-deficient (n - ddof < d) and only eps*I made it SPD.
    bool rank_deficient = false;
};

}  // namespace gandist
