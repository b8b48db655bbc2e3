#include "asrs/error.hpp"

namespace asrs {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::VersionUnsupported: return "VersionUnsupported";
        case ErrorCode::BadHeader: return "BadHeader";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
        case ErrorCode::TrailingData: return "TrailingData";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::DuplicateSampleId: return "DuplicateSampleId";
        case ErrorCode::InvalidSampleId: return "InvalidSampleId";
        case ErrorCode::MixedDimensions: return "MixedDimensions";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::BadValue: return "BadValue";
        case ErrorCode::DuplicateKey: return "DuplicateKey";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::NonFiniteScore: return "NonFiniteScore";
        case ErrorCode::MissingLabel: return "MissingLabel";
        case ErrorCode::MissingPrediction: return "MissingPrediction";
        case ErrorCode::UngroupedSample: return "UngroupedSample";
        case ErrorCode::DegenerateGroup: return "DegenerateGroup";
        case ErrorCode::UnreachableTarget: return "UnreachableTarget";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::MissingGroup: return "MissingGroup";
        case ErrorCode::UnknownTask: return "UnknownTask";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::LeakageGuard: return "LeakageGuard";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

Error::Error(ErrorCode code, const std::string& message, std::size_t row, std::string column)
    : std::runtime_error(std::string(to_string(code)) + ": " + message + " (row " +
                         std::to_string(row) + (column.empty() ? "" : ", column '" + column + "'") +
                         ")"),
      code_(code),
      row_(row),
      column_(std::move(column)),
      detail_(message) {}

Error with_context(const Error& e, const std::string& context) {
    if (e.row()) return Error(e.code(), context + ": " + e.detail(), *e.row(), e.column());
    return Error(e.code(), context + ": " + e.detail());
}

}  // namespace asrs
