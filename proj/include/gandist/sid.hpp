#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "gandist/core.hpp"
#include "gandist/error.hpp"
#include "gandist/rng.hpp"

namespace gandist {

/// Per-dimension affine transform fitted on the reference set. Scales are
/// floored at 1e-9 so constant dimensions stay usable.
struct StandardizationStats {
    Vector shift;
    Vector scale;
};

inline StandardizationStats fit_standardization(const FeatureSet& ref) {
    if (ref.rows() < 2) {
        throw InputError(ErrorCode::InsufficientSamples,
                         "standardization needs n >= 2, got n=" + std::to_string(ref.rows()));
    }
    const Vector shift = ref.data().colwise().mean().transpose();
    const Matrix centered = ref.data().rowwise() - shift.transpose();
    Vector scale(ref.dims());
    const double denom = static_cast<double>(ref.rows() - 1);
    for (Eigen::Index k = 0; k < ref.dims(); ++k) {
        scale(k) = std::max(std::sqrt(centered.col(k).squaredNorm() / denom), 1e-9);
    }
    return StandardizationStats{shift, scale};
}

/// Regularized inverse-power kernel of order m:
/// phi(x, y) = (|x - y|^2 + eps^2)^(-m/2). Strictly positive and strictly
/// decreasing in the distance.
inline double kernel_phi(const Vector& x, const Vector& y, int order_m, double kernel_eps) {
    if (x.size() != y.size()) {
        throw InputError(ErrorCode::DimensionMismatch,
                         "kernel arguments have different dimensions: " + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()));
    }
    if (order_m < 1) throw InputError(ErrorCode::BadConfig, "order_m must be >= 1");
    if (!(kernel_eps > 0.0)) throw InputError(ErrorCode::BadConfig, "kernel_eps must be > 0");
    const double base = (x - y).squaredNorm() + kernel_eps * kernel_eps;
    if (order_m == 2) return 1.0 / base;
    return std::pow(base, -0.5 * static_cast<double>(order_m));
}

/// Mx test points drawn uniformly from the L-inf ball of radius side_r / 2
/// around a center. Fully determined by the arguments.
struct HypercubeSample {
    Vector center;
    Matrix points;  // Mx x d
};

namespace detail {

// Row-major fill in a fixed (point, coordinate) order; u in [0,1) maps to an
// offset in [-r/2, r/2), so L-inf containment holds by construction.
inline void fill_hypercube_points(const Eigen::RowVectorXd& center, double side_r,
                                  std::int64_t count_mx, std::uint64_t stream_seed, Matrix& out) {
    SplitMix64 rng(stream_seed);
    out.resize(count_mx, center.size());
    for (Eigen::Index l = 0; l < out.rows(); ++l) {
        for (Eigen::Index k = 0; k < out.cols(); ++k) {
            out(l, k) = center(k) + (rng.next_unit() - 0.5) * side_r;
        }
    }
}

}  // namespace detail

inline HypercubeSample hypercube_sample(const Vector& center, double side_r,
                                        std::int64_t count_mx, std::uint64_t stream_seed) {
    if (!(side_r > 0.0)) throw InputError(ErrorCode::BadConfig, "side_r must be > 0");
    if (count_mx < 1) throw InputError(ErrorCode::BadConfig, "count_mx must be >= 1");
    HypercubeSample sample;
    sample.center = center;
    detail::fill_hypercube_points(center.transpose(), side_r, count_mx, stream_seed,
                                  sample.points);
    return sample;
}

/// sid_score plus each batch's partial value and their standard error.
struct SidDiagnostics {
    MetricScore score;
    std::vector<double> batch_values;
    double standard_error = 0.0;
};

namespace detail {

// Sum of phi(x_l, y_j) over all (l, j), via the norm expansion
// |x - y|^2 = |x|^2 + |y|^2 - 2 x.y so the cross terms are one GEMM.
// Fixed (l, j) accumulation order; identical inputs give identical sums,
// which is what cancels the two inner sums termwise for identical sets.
inline double phi_sum(const Matrix& points, const Vector& point_norms, const Matrix& members,
                      const Vector& member_norms, int order_m, double eps_sq) {
    const Matrix cross = points * members.transpose();
    double total = 0.0;
    for (Eigen::Index l = 0; l < points.rows(); ++l) {
        for (Eigen::Index j = 0; j < members.rows(); ++j) {
            double dist_sq = point_norms(l) + member_norms(j) - 2.0 * cross(l, j);
            if (dist_sq < 0.0) dist_sq = 0.0;  // norm-expansion round-off
            const double base = dist_sq + eps_sq;
            total += order_m == 2 ? 1.0 / base
                                  : std::pow(base, -0.5 * static_cast<double>(order_m));
        }
    }
    return total;
}

}  // namespace detail

/// Signed kernel-potential distance. Batches are disjoint equal-size subsamples of
/// both sets from one seeded shuffle per set (remainder rows dropped); every
/// generated sample of a batch serves as a hypercube center; the estimate is
/// the average kernel-potential difference over (batch, center, test point).
/// Positive means the reference is more diverse than the generated set.
///
/// Evaluation may fan out across worker threads, but per-(batch, center)
/// contributions land in preallocated slots and are reduced in index order,
/// so the result is bitwise identical for any worker count.
inline SidDiagnostics sid_diagnostics(const FeatureSet& ref, const FeatureSet& gen,
                                      const SidConfig& cfg = {}, int threads = 0) {
    cfg.validate();
    if (ref.dims() != gen.dims()) {
        throw InputError(ErrorCode::DimensionMismatch,
                         "feature dimensions differ: " + std::to_string(ref.dims()) + " vs " +
                             std::to_string(gen.dims()));
    }
    const std::int64_t n_ref = ref.rows();
    const std::int64_t n_gen = gen.rows();
    const std::int64_t batches = cfg.batches_n;
    if (n_ref < batches || n_gen < batches) {
        throw InputError(ErrorCode::InsufficientSamples,
                         "need at least batches_n=" + std::to_string(batches) +
                             " rows per set, got n_ref=" + std::to_string(n_ref) +
                             ", n_gen=" + std::to_string(n_gen));
    }

    Matrix t_ref;
    Matrix t_gen;
    if (cfg.standardize) {
        const StandardizationStats stats = fit_standardization(ref);
        const auto apply = [&stats](const Matrix& data) -> Matrix {
            return (data.rowwise() - stats.shift.transpose()).array().rowwise() /
                   stats.scale.transpose().array();
        };
        t_ref = apply(ref.data());
        t_gen = apply(gen.data());
    } else {
        t_ref = ref.data();
        t_gen = gen.data();
    }

    // The shuffle stream is keyed by set size only, so identical inputs get
    // identical batch membership and the score cancels to exactly zero.
    const auto perm_ref = seeded_permutation(n_ref, derive_stream(cfg.seed, stream_tag::kShuffle,
                                                                  static_cast<std::uint64_t>(n_ref)));
    const auto perm_gen = seeded_permutation(n_gen, derive_stream(cfg.seed, stream_tag::kShuffle,
                                                                  static_cast<std::uint64_t>(n_gen)));
    const std::int64_t size_ref = n_ref / batches;
    const std::int64_t size_gen = n_gen / batches;

    std::vector<Matrix> batch_ref(static_cast<std::size_t>(batches));
    std::vector<Matrix> batch_gen(static_cast<std::size_t>(batches));
    std::vector<Vector> norms_ref(static_cast<std::size_t>(batches));
    std::vector<Vector> norms_gen(static_cast<std::size_t>(batches));
    for (std::int64_t b = 0; b < batches; ++b) {
        Matrix rb(size_ref, ref.dims());
        for (std::int64_t i = 0; i < size_ref; ++i) {
            rb.row(i) = t_ref.row(perm_ref[static_cast<std::size_t>(b * size_ref + i)]);
        }
        Matrix gb(size_gen, gen.dims());
        for (std::int64_t j = 0; j < size_gen; ++j) {
            gb.row(j) = t_gen.row(perm_gen[static_cast<std::size_t>(b * size_gen + j)]);
        }
        norms_ref[static_cast<std::size_t>(b)] = rb.rowwise().squaredNorm();
        norms_gen[static_cast<std::size_t>(b)] = gb.rowwise().squaredNorm();
        batch_ref[static_cast<std::size_t>(b)] = std::move(rb);
        batch_gen[static_cast<std::size_t>(b)] = std::move(gb);
    }

    const std::int64_t tasks = batches * size_gen;
    std::vector<double> contributions(static_cast<std::size_t>(tasks), 0.0);
    const double eps_sq = cfg.kernel_eps * cfg.kernel_eps;

    const auto run_range = [&](std::int64_t begin, std::int64_t end) {
        Matrix points;
        for (std::int64_t t = begin; t < end; ++t) {
            const std::int64_t b = t / size_gen;
            const std::int64_t j = t % size_gen;
            const auto bi = static_cast<std::size_t>(b);
            detail::fill_hypercube_points(
                batch_gen[bi].row(j), cfg.side_r, cfg.test_points_mx,
                derive_stream(cfg.seed, stream_tag::kHypercube, static_cast<std::uint64_t>(b),
                              static_cast<std::uint64_t>(j)),
                points);
            const Vector point_norms = points.rowwise().squaredNorm();
            const double gen_sum = detail::phi_sum(points, point_norms, batch_gen[bi],
                                                   norms_gen[bi], cfg.order_m, eps_sq);
            const double ref_sum = detail::phi_sum(points, point_norms, batch_ref[bi],
                                                   norms_ref[bi], cfg.order_m, eps_sq);
            contributions[static_cast<std::size_t>(t)] = gen_sum - ref_sum;
        }
    };

    std::int64_t workers = threads > 0
                               ? threads
                               : static_cast<std::int64_t>(std::thread::hardware_concurrency());
    workers = std::clamp<std::int64_t>(workers, 1, tasks);
    if (workers == 1) {
        run_range(0, tasks);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const std::int64_t chunk = (tasks + workers - 1) / workers;
        for (std::int64_t w = 0; w < workers; ++w) {
            const std::int64_t begin = w * chunk;
            const std::int64_t end = std::min(tasks, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& worker : pool) worker.join();
    }

    // Fixed-order reduction, independent of how the work was scheduled.
    SidDiagnostics diag;
    diag.batch_values.resize(static_cast<std::size_t>(batches), 0.0);
    const double per_batch_norm =
        static_cast<double>(cfg.test_points_mx) * static_cast<double>(size_gen);
    double total = 0.0;
    for (std::int64_t b = 0; b < batches; ++b) {
        double batch_sum = 0.0;
        for (std::int64_t j = 0; j < size_gen; ++j) {
            batch_sum += contributions[static_cast<std::size_t>(b * size_gen + j)];
        }
        diag.batch_values[static_cast<std::size_t>(b)] = batch_sum / per_batch_norm;
        total += diag.batch_values[static_cast<std::size_t>(b)];
    }
    const double value = total / static_cast<double>(batches);
    if (batches > 1) {
        double ss = 0.0;
        for (const double v : diag.batch_values) ss += (v - value) * (v - value);
        diag.standard_error = std::sqrt(ss / static_cast<double>(batches - 1)) /
                              std::sqrt(static_cast<double>(batches));
    }

    diag.score.kind = MetricKind::Sid;
    diag.score.value = value;
    diag.score.config_digest = cfg.digest();
    diag.score.n_ref = n_ref;
    diag.score.n_gen = n_gen;
    return diag;
}

inline MetricScore sid_score(const FeatureSet& ref, const FeatureSet& gen,
                             const SidConfig& cfg = {}, int threads = 0) {
    return sid_diagnostics(ref, gen, cfg, threads).score;
}

}  // namespace gandist
