#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "gandist/core.hpp"
#include "gandist/fid.hpp"
#include "gandist/linalg.hpp"
#include "gandist/sid.hpp"
#include "gandist/synth.hpp"

namespace gandist {

struct SelftestResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

namespace detail {

// Test-only fault hook: GANDIST_FAULT=trace_sign corrupts the checked value
// so the harness around the self-test can verify failures are detected.
inline bool fault_enabled(const char* fault) {
    const char* env = std::getenv("GANDIST_FAULT");
    return env != nullptr && std::string(env) == fault;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

inline std::string sci(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", value);
    return buf;
}

}  // namespace detail

inline SelftestResult selftest_trace_oracle(bool quick) {
    SelftestResult result{"trace_oracle_agreement", true, ""};
    const int pairs = quick ? 12 : 40;
    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
        const Eigen::Index d = 2 + (p % 7);
        const Matrix a = random_spd(d, 1000 + static_cast<std::uint64_t>(p) * 2);
        const Matrix b = random_spd(d, 1001 + static_cast<std::uint64_t>(p) * 2);
        double primary = trace_sqrt_product(a, b);
        if (detail::fault_enabled("trace_sign")) primary = -primary;
        const double oracle = brute_trace_sqrt_product(a, b);
        worst = std::max(worst, detail::rel_diff(primary, oracle));
    }
    result.ok = worst <= 1e-8;
    result.detail = "max relative difference " + detail::sci(worst) + " over " +
                    std::to_string(pairs) + " SPD pairs (limit 1e-8)";
    return result;
}

inline SelftestResult selftest_fid_closed_form(bool quick) {
    SelftestResult result{"fid_closed_form", true, ""};
    FidConfig exact;
    exact.eps = 0.0;
    double worst_analytic = 0.0;
    for (int c = 0; c < 8; ++c) {
        const Eigen::Index d = 2 + 2 * (c % 4);
        const double sigma_ref = 0.5 + 0.5 * c;
        const double sigma_gen = 1.0 + 0.25 * c;
        Vector mu_ref = Vector::Zero(d);
        Vector mu_gen = Vector::Zero(d);
        mu_gen(0) = 1.0 + c;
        const GaussianSummary ref(mu_ref, sigma_ref * sigma_ref * Matrix::Identity(d, d), 0);
        const GaussianSummary gen(mu_gen, sigma_gen * sigma_gen * Matrix::Identity(d, d), 0);
        const double expected = (mu_ref - mu_gen).squaredNorm() +
                                static_cast<double>(d) * (sigma_ref - sigma_gen) * (sigma_ref - sigma_gen);
        worst_analytic = std::max(worst_analytic,
                                  detail::rel_diff(fid_score(ref, gen, exact).value, expected));
    }

    const std::int64_t n = quick ? 4000 : 20000;
    const double limit = quick ? 0.10 : 0.05;
    const auto spec_ref = GaussianSpec::isotropic(8, 0.0, 1.0, n, 7001);
    auto spec_gen = GaussianSpec::isotropic(8, 0.0, 1.0, n, 7002);
    spec_gen.mean(0) = 3.0;
    const double closed = closed_form_fid(spec_ref, spec_gen);
    const double sampled = fid_from_features(sample_gaussian(spec_ref, Role::Reference),
                                             sample_gaussian(spec_gen, Role::Generated))
                               .value;
    const double sampling_err = detail::rel_diff(sampled, closed);

    result.ok = worst_analytic <= 1e-10 && sampling_err <= limit;
    result.detail = "analytic err " + detail::sci(worst_analytic) + " (limit 1e-10), sampled " +
                    std::to_string(sampled) + " vs closed " + std::to_string(closed);
    return result;
}

inline SelftestResult selftest_sid_exact_zero(bool quick) {
    SelftestResult result{"sid_exact_zero", true, ""};
    const std::int64_t n = quick ? 500 : 1500;
    const auto spec = GaussianSpec::isotropic(6, 0.0, 1.0, n, 8101);
    const FeatureSet ref = sample_gaussian(spec, Role::Reference);
    const FeatureSet gen(ref.data(), Role::Generated);
    const double value = sid_score(ref, gen).value;
    result.ok = value == 0.0;
    result.detail = "identical inputs scored " + std::to_string(value) + " (must be exactly 0)";
    return result;
}

inline SelftestResult selftest_sid_sign(bool quick) {
    SelftestResult result{"sid_sign", true, ""};
    const std::int64_t n = quick ? 3000 : 4000;
    SidConfig cfg;
    cfg.seed = 42;
    const FeatureSet wide =
        sample_gaussian(GaussianSpec::isotropic(8, 0.0, 2.0, n, 8201), Role::Reference);
    const FeatureSet narrow =
        sample_gaussian(GaussianSpec::isotropic(8, 0.0, 1.0, n, 8202), Role::Generated);
    const double diverse_ref = sid_score(wide, narrow, cfg).value;
    const FeatureSet narrow_ref(narrow.data(), Role::Reference);
    const FeatureSet wide_gen(wide.data(), Role::Generated);
    const double swapped = sid_score(narrow_ref, wide_gen, cfg).value;
    result.ok = diverse_ref > 0.0 && swapped < 0.0;
    result.detail = "diverse reference scored " + std::to_string(diverse_ref) +
                    " (> 0 expected), swapped " + std::to_string(swapped) + " (< 0 expected)";
    return result;
}

inline SelftestResult selftest_sid_determinism(bool quick) {
    SelftestResult result{"sid_determinism", true, ""};
    const std::int64_t n = quick ? 400 : 1200;
    SidConfig cfg;
    cfg.seed = 9;
    cfg.batches_n = 4;
    const FeatureSet ref =
        sample_gaussian(GaussianSpec::isotropic(6, 0.0, 1.5, n, 8301), Role::Reference);
    const FeatureSet gen =
        sample_gaussian(GaussianSpec::isotropic(6, 0.0, 1.0, n, 8302), Role::Generated);
    const double once = sid_score(ref, gen, cfg, 1).value;
    const double again = sid_score(ref, gen, cfg, 1).value;
    const double threaded = sid_score(ref, gen, cfg, 4).value;
    result.ok = once == again && once == threaded;
    result.detail = "runs " + std::to_string(once) + " / " + std::to_string(again) + " / " +
                    std::to_string(threaded) + " (threads 1/1/4 must match bitwise)";
    return result;
}

/// The oracle suite behind `selftest`: every check is deterministic and
/// self-contained. quick trims sample sizes to stay well under half a minute.
inline std::vector<SelftestResult> run_selftest(bool quick) {
    std::vector<SelftestResult> results;
    results.push_back(selftest_trace_oracle(quick));
    results.push_back(selftest_fid_closed_form(quick));
    results.push_back(selftest_sid_exact_zero(quick));
    results.push_back(selftest_sid_sign(quick));
    results.push_back(selftest_sid_determinism(quick));
    return results;
}

}  // namespace gandist
