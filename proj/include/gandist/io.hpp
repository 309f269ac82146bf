#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gandist/core.hpp"
#include "gandist/error.hpp"

namespace gandist {

// FDS1 feature container, byte-exact:
//   bytes 0..3   magic "FDS1"
//   byte  4      dtype: 0x01 = 32-bit float, 0x02 = 64-bit float
//   bytes 5..7   reserved, zero
//   bytes 8..15  row count, unsigned 64-bit little-endian
//   bytes 16..23 dimension count, unsigned 64-bit little-endian
//   then rows * dims values, row-major, little-endian
enum class FeatureDtype : std::uint8_t { F32 = 0x01, F64 = 0x02 };

namespace detail {

inline constexpr char kMagic[4] = {'F', 'D', 'S', '1'};
inline constexpr std::size_t kHeaderBytes = 24;

inline void put_u64_le(std::string& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

inline std::uint64_t get_u64_le(const unsigned char* bytes) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return value;
}

}  // namespace detail

/// Writes a feature set in the FDS1 container. The 64-bit dtype round-trips
/// bitwise; the 32-bit dtype stores values after float rounding.
inline void write_features(const FeatureSet& fs, const std::filesystem::path& path,
                           FeatureDtype dtype = FeatureDtype::F64) {
    std::string payload;
    payload.reserve(detail::kHeaderBytes +
                    static_cast<std::size_t>(fs.rows()) * static_cast<std::size_t>(fs.dims()) *
                        (dtype == FeatureDtype::F64 ? 8 : 4));
    payload.append(detail::kMagic, 4);
    payload.push_back(static_cast<char>(dtype));
    payload.append(3, '\0');
    detail::put_u64_le(payload, static_cast<std::uint64_t>(fs.rows()));
    detail::put_u64_le(payload, static_cast<std::uint64_t>(fs.dims()));
    for (Eigen::Index i = 0; i < fs.rows(); ++i) {
        for (Eigen::Index j = 0; j < fs.dims(); ++j) {
            if (dtype == FeatureDtype::F64) {
                detail::put_u64_le(payload, std::bit_cast<std::uint64_t>(fs.data()(i, j)));
            } else {
                const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(fs.data()(i, j)));
                for (int b = 0; b < 4; ++b) {
                    payload.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
                }
            }
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError(ErrorCode::IoFailure, "cannot open for writing: " + path.string());
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw InputError(ErrorCode::IoFailure, "write failed: " + path.string());
}

/// Reads an FDS1 container and validates the result as a feature set.
inline FeatureSet read_features(const std::filesystem::path& path, Role role = Role::Reference) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(ErrorCode::IoFailure, "cannot open: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw InputError(ErrorCode::IoFailure, "read failed: " + path.string());

    if (bytes.size() < 4 || std::memcmp(bytes.data(), detail::kMagic, 4) != 0) {
        throw InputError(ErrorCode::BadMagic, path.string() + ": not an FDS1 file");
    }
    if (bytes.size() < detail::kHeaderBytes) {
        throw InputError(ErrorCode::TruncatedPayload,
                         path.string() + ": header needs " +
                             std::to_string(detail::kHeaderBytes) + " bytes, file has " +
                             std::to_string(bytes.size()));
    }
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint8_t dtype_byte = raw[4];
    if (dtype_byte != static_cast<std::uint8_t>(FeatureDtype::F32) &&
        dtype_byte != static_cast<std::uint8_t>(FeatureDtype::F64)) {
        throw InputError(ErrorCode::BadDtype,
                         path.string() + ": dtype byte " + std::to_string(dtype_byte) +
                             " is not 0x01 (f32) or 0x02 (f64)");
    }
    if (raw[5] != 0 || raw[6] != 0 || raw[7] != 0) {
        throw InputError(ErrorCode::BadMagic, path.string() + ": reserved bytes must be zero");
    }
    const std::uint64_t rows = detail::get_u64_le(raw + 8);
    const std::uint64_t dims = detail::get_u64_le(raw + 16);
    const std::uint64_t width = dtype_byte == static_cast<std::uint8_t>(FeatureDtype::F64) ? 8 : 4;
    if (rows > (1ULL << 40) || dims > (1ULL << 40) ||
        (dims != 0 && rows > (1ULL << 40) / dims)) {
        throw InputError(ErrorCode::TruncatedPayload,
                         path.string() + ": implausible shape " + std::to_string(rows) + "x" +
                             std::to_string(dims));
    }
    const std::uint64_t expected = rows * dims * width;
    const std::uint64_t actual = bytes.size() - detail::kHeaderBytes;
    if (expected != actual) {
        throw InputError(ErrorCode::TruncatedPayload,
                         path.string() + ": payload expected " + std::to_string(expected) +
                             " bytes, got " + std::to_string(actual));
    }
    if (rows == 0 || dims == 0) {
        throw InputError(ErrorCode::EmptySet, path.string() + ": zero rows or dims");
    }

    Matrix data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dims));
    const unsigned char* cursor = raw + detail::kHeaderBytes;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            if (width == 8) {
                data(i, j) = std::bit_cast<double>(detail::get_u64_le(cursor));
            } else {
                std::uint32_t bits = 0;
                for (int b = 0; b < 4; ++b) {
                    bits |= static_cast<std::uint32_t>(cursor[b]) << (8 * b);
                }
                data(i, j) = static_cast<double>(std::bit_cast<float>(bits));
            }
            cursor += width;
        }
    }
    try {
        return FeatureSet(std::move(data), role, path.string());
    } catch (const InputError& err) {
        throw InputError(err.code(), path.string() + ": " + err.what());
    }
}

namespace detail {

inline bool parse_cell(const std::string& text, double& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        const auto first = cell.find_first_not_of(" \t");
        const auto last = cell.find_last_not_of(" \t");
        cells.push_back(first == std::string::npos ? std::string()
                                                   : cell.substr(first, last - first + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace detail

FeatureSet import_csv(const std::filesystem::path& path, Role role);

/// Loads features by extension: .fds container or .csv import.
inline FeatureSet load_features_auto(const std::filesystem::path& path,
                                     Role role = Role::Reference) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".fds") return read_features(path, role);
    if (ext == ".csv") return import_csv(path, role);
    throw InputError(ErrorCode::IoFailure,
                     path.string() + ": unsupported extension '" + ext +
                         "' (expected .fds or .csv)");
}

/// Imports a rectangular numeric CSV (comma separator, '.' decimal point, no
/// quoting). A single header row is detected when the first row has any
/// non-numeric cell. Row indices in diagnostics are zero-based file lines.
inline FeatureSet import_csv(const std::filesystem::path& path, Role role = Role::Reference) {
    std::ifstream in(path);
    if (!in) throw InputError(ErrorCode::IoFailure, "cannot open: " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_index = 0;
    Eigen::Index dims = -1;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            ++line_index;
            continue;
        }
        const auto cells = detail::split_csv_line(line);
        std::vector<double> values(cells.size());
        bool all_numeric = true;
        std::size_t bad_col = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!detail::parse_cell(cells[c], values[c])) {
                all_numeric = false;
                bad_col = c;
                break;
            }
        }
        if (first_content_row) {
            first_content_row = false;
            if (!all_numeric) {
                ++line_index;  // header row, skipped
                continue;
            }
        } else if (!all_numeric) {
            throw InputError(ErrorCode::NonNumericCell,
                             path.string() + ": non-numeric cell at row " +
                                 std::to_string(line_index) + ", col " + std::to_string(bad_col));
        }
        if (dims < 0) {
            dims = static_cast<Eigen::Index>(values.size());
        } else if (static_cast<Eigen::Index>(values.size()) != dims) {
            throw InputError(ErrorCode::RaggedRows,
                             path.string() + ": row " + std::to_string(line_index) + " has " +
                                 std::to_string(values.size()) + " values, expected " +
                                 std::to_string(dims));
        }
        rows.push_back(std::move(values));
        ++line_index;
    }
    if (in.bad()) throw InputError(ErrorCode::IoFailure, "read failed: " + path.string());
    if (rows.empty()) throw InputError(ErrorCode::EmptySet, path.string() + ": no data rows");
    try {
        return validate_feature_set(rows, role, path.string());
    } catch (const InputError& err) {
        throw InputError(err.code(), path.string() + ": " + err.what());
    }
}

}  // namespace gandist
