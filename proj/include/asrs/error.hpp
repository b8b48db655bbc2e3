#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asrs {

enum class ErrorCode {
    BadMagic,
    VersionUnsupported,
    BadHeader,
    TruncatedFile,
    TrailingData,
    NonFiniteValue,
    DuplicateSampleId,
    InvalidSampleId,
    MixedDimensions,
    EmptyInput,
    IoFailure,
    MissingColumn,
    BadValue,
    DuplicateKey,
    LengthMismatch,
    TooFewSamples,
    NonFiniteScore,
    MissingLabel,
    MissingPrediction,
    UngroupedSample,
    DegenerateGroup,
    UnreachableTarget,
    OutOfRange,
    MissingGroup,
    UnknownTask,
    InvalidArgument,
    LeakageGuard,
};

std::string_view to_string(ErrorCode code);

// Single exception type for every recoverable failure in the toolkit. Row and
// column are set by the table readers (row is 1-based, counting the header).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    Error(ErrorCode code, const std::string& message, std::size_t row, std::string column);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }
    // The message without the error-code prefix and row suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> row_;
    std::string column_;
    std::string detail_;
};

// Same error with "<context>: " prepended to the detail; row and column are kept.
Error with_context(const Error& e, const std::string& context);

}  // namespace asrs
