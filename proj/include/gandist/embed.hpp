#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gandist/core.hpp"
#include "gandist/error.hpp"

namespace gandist {

// Deterministic stand-in for a pretrained feature extractor: 4x4 spatial
// grid of per-channel means plus 3 per-channel standard deviations, d = 51.
// NOT a perceptual embedding; its FID/SID values are not comparable to
// Inception-based scores.
inline constexpr int kEmbedGrid = 4;
inline constexpr int kEmbedChannels = 3;
inline constexpr int kEmbedDim = kEmbedGrid * kEmbedGrid * kEmbedChannels + kEmbedChannels;

/// Row-major, channel-interleaved pixels with values in [0, 1].
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> pixels;

    double at(int y, int x, int c) const {
        return pixels[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
};

namespace detail {

inline bool is_ppm_space(int c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline std::uint64_t parse_ppm_uint(const std::string& bytes, std::size_t& pos,
                                    const std::string& where) {
    while (pos < bytes.size() && is_ppm_space(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        throw InputError(ErrorCode::BadImage, where + ": malformed P6 header");
    }
    std::uint64_t value = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        value = value * 10 + static_cast<std::uint64_t>(bytes[pos] - '0');
        if (value > 1000000) throw InputError(ErrorCode::BadImage, where + ": dimension too large");
        ++pos;
    }
    return value;
}

}  // namespace detail

/// Strict binary portable-pixmap reader: "P6", whitespace-separated width,
/// height and maxval (must be 255), one whitespace byte, then 3*W*H bytes.
inline Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(ErrorCode::IoFailure, "cannot open: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw InputError(ErrorCode::IoFailure, "read failed: " + path.string());

    const std::string where = path.string();
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
        throw InputError(ErrorCode::BadImage, where + ": missing P6 signature");
    }
    std::size_t pos = 2;
    const std::uint64_t width = detail::parse_ppm_uint(bytes, pos, where);
    const std::uint64_t height = detail::parse_ppm_uint(bytes, pos, where);
    const std::uint64_t maxval = detail::parse_ppm_uint(bytes, pos, where);
    if (maxval != 255) {
        throw InputError(ErrorCode::BadImage,
                         where + ": maxval must be 255, got " + std::to_string(maxval));
    }
    if (pos >= bytes.size() || !detail::is_ppm_space(static_cast<unsigned char>(bytes[pos]))) {
        throw InputError(ErrorCode::BadImage, where + ": expected whitespace after maxval");
    }
    ++pos;
    const std::uint64_t expected = 3 * width * height;
    if (bytes.size() - pos != expected) {
        throw InputError(ErrorCode::BadImage,
                         where + ": pixel payload expected " + std::to_string(expected) +
                             " bytes, got " + std::to_string(bytes.size() - pos));
    }

    Image image;
    image.width = static_cast<int>(width);
    image.height = static_cast<int>(height);
    image.channels = 3;
    image.pixels.resize(static_cast<std::size_t>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        image.pixels[i] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
    }
    return image;
}

/// Embeds one image: grid cell (i, j, c) holds the mean of channel c over the
/// pixel block [floor(i*H/4), floor((i+1)*H/4)) x [floor(j*W/4), ...), laid
/// out as (i*4 + j)*3 + c; the final 3 entries are per-channel population
/// standard deviations over the whole image.
inline Vector embed_image(const Image& image) {
    if (image.channels != kEmbedChannels) {
        throw InputError(ErrorCode::BadChannelCount,
                         "expected 3 channels, got " + std::to_string(image.channels));
    }
    if (image.height < kEmbedGrid || image.width < kEmbedGrid) {
        throw InputError(ErrorCode::ImageTooSmall,
                         "image must be at least 4x4, got " + std::to_string(image.height) + "x" +
                             std::to_string(image.width));
    }
    Vector out(kEmbedDim);
    for (int gi = 0; gi < kEmbedGrid; ++gi) {
        const int y0 = gi * image.height / kEmbedGrid;
        const int y1 = (gi + 1) * image.height / kEmbedGrid;
        for (int gj = 0; gj < kEmbedGrid; ++gj) {
            const int x0 = gj * image.width / kEmbedGrid;
            const int x1 = (gj + 1) * image.width / kEmbedGrid;
            for (int c = 0; c < kEmbedChannels; ++c) {
                double sum = 0.0;
                for (int y = y0; y < y1; ++y) {
                    for (int x = x0; x < x1; ++x) sum += image.at(y, x, c);
                }
                out((gi * kEmbedGrid + gj) * kEmbedChannels + c) =
                    sum / (static_cast<double>(y1 - y0) * static_cast<double>(x1 - x0));
            }
        }
    }
    const double count = static_cast<double>(image.width) * static_cast<double>(image.height);
    for (int c = 0; c < kEmbedChannels; ++c) {
        double sum = 0.0;
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) sum += image.at(y, x, c);
        }
        const double mean = sum / count;
        double ss = 0.0;
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                const double dev = image.at(y, x, c) - mean;
                ss += dev * dev;
            }
        }
        out(kEmbedGrid * kEmbedGrid * kEmbedChannels + c) = std::sqrt(ss / count);
    }
    return out;
}

/// Embeds every .ppm file in a directory, rows ordered by filename
/// (byte-lexicographic) so output is stable across platforms. Any undecodable
/// file aborts the run with the offending filename.
inline FeatureSet embed_directory(const std::filesystem::path& dir, Role role) {
    if (!std::filesystem::is_directory(dir)) {
        throw InputError(ErrorCode::IoFailure, "not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) {
        throw InputError(ErrorCode::NoImages, "no .ppm files in " + dir.string());
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });

    Matrix data(static_cast<Eigen::Index>(files.size()), kEmbedDim);
    for (std::size_t i = 0; i < files.size(); ++i) {
        data.row(static_cast<Eigen::Index>(i)) = embed_image(read_ppm(files[i])).transpose();
    }
    return FeatureSet(std::move(data), role, dir.string());
}

}  // namespace gandist
