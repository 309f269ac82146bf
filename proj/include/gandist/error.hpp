#pragma once

#include <stdexcept>
#include <string>

namespace gandist {

// Every failure the library can report. Input-side codes map to CLI exit
// code 2, numeric-side codes to exit code 3.
enum class ErrorCode {
    // input / validation
    EmptySet,
    NonFinite,
    RaggedRows,
    NonNumericCell,
    InsufficientSamples,
    DimensionMismatch,
    BadConfig,
    BadMagic,
    BadDtype,
    TruncatedPayload,
    IoFailure,
    NoImages,
    ImageTooSmall,
    BadChannelCount,
    BadImage,
    BadManifest,
    // numeric
    NotSymmetric,
    NoConvergence,
    IndefiniteMatrix,
    NonPositiveEigenvalue,
    InternalNumericalError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::RaggedRows: return "RaggedRows";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::BadDtype: return "BadDtype";
        case ErrorCode::TruncatedPayload: return "TruncatedPayload";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::NoImages: return "NoImages";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::BadChannelCount: return "BadChannelCount";
        case ErrorCode::BadImage: return "BadImage";
        case ErrorCode::BadManifest: return "BadManifest";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::IndefiniteMatrix: return "IndefiniteMatrix";
        case ErrorCode::NonPositiveEigenvalue: return "NonPositiveEigenvalue";
        case ErrorCode::InternalNumericalError: return "InternalNumericalError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Malformed or unusable input (files, configs, feature sets). CLI exit 2.
class InputError : public Error {
  public:
    using Error::Error;
};

/// Numerical breakdown that valid input should never trigger. CLI exit 3.
class NumericError : public Error {
  public:
    using Error::Error;
};

}  // namespace gandist
