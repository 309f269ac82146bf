#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace gandist {

namespace detail {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Used both as the stream
// generator and as the mixing function for stream-key derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Tags keep independent uses of the master seed on disjoint streams.
namespace stream_tag {
inline constexpr std::uint64_t kShuffle = 0x5348554646ULL;     // batch shuffles
inline constexpr std::uint64_t kHypercube = 0x48435542ULL;     // test-point draws
inline constexpr std::uint64_t kGaussian = 0x4741555353ULL;    // synthetic sampling
inline constexpr std::uint64_t kSpd = 0x535044ULL;             // random SPD matrices
}  // namespace stream_tag

/// Derives a stream key from a master seed plus up to three indices.
/// Identical arguments always give the identical key, so every consumer of
/// randomness can be rerun or reordered without changing its draws.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                                   std::uint64_t b = 0) {
    std::uint64_t s = detail::mix64(seed ^ 0x243f6a8885a308d3ULL);
    s = detail::mix64(s ^ tag);
    s = detail::mix64(s ^ a);
    s = detail::mix64(s ^ b);
    return s;
}

/// Small deterministic generator over one derived stream. Not cryptographic;
/// statistical quality is ample for Monte-Carlo estimation.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t stream_key) : state_(stream_key) {}

    std::uint64_t next() { return detail::mix64(state_ += kGamma); }

    /// Uniform double in [0, 1), 53 bits of precision.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // u1 in (0, 1] keeps the log finite.
        const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

/// Fisher-Yates permutation of {0..n-1} drawn from the given stream.
inline std::vector<std::int64_t> seeded_permutation(std::int64_t n, std::uint64_t stream_key) {
    std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    SplitMix64 rng(stream_key);
    for (std::int64_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    return perm;
}

}  // namespace gandist
