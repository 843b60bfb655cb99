#include "skinpal/error.hpp"

namespace skinpal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateCohortId: return "DuplicateCohortId";
    case ErrorCode::UnknownCohort: return "UnknownCohort";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::WrongPointCount: return "WrongPointCount";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCohort: return "EmptyCohort";
    case ErrorCode::AllSamplesGated: return "AllSamplesGated";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptyFaceBox: return "EmptyFaceBox";
    case ErrorCode::EmptyPalette: return "EmptyPalette";
    case ErrorCode::DuplicateCohort: return "DuplicateCohort";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::EmptySystem: return "EmptySystem";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace skinpal
