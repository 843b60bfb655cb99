#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skinpal {

enum class ErrorCode {
  MissingFile,
  ParseError,
  DuplicateCohortId,
  UnknownCohort,
  DecodeError,
  WrongPointCount,
  InvalidCount,
  InvalidArgument,
  EmptyCohort,
  AllSamplesGated,
  TooFewSamples,
  EmptyFaceBox,
  EmptyPalette,
  DuplicateCohort,
  DuplicateLabel,
  EmptySystem,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace skinpal
