#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fiblang {

enum class ErrorCode {
  InvalidArgument,
  UnboundedHomSet,
  VertexMismatch,
  NotComposable,
  BoundExceeded,
  BaseMismatch,
  NotAFibration,
  MissingEdgeAction,
  DiagramOutsideLanguage,
  LanguageMismatch,
  FibreNotEmpty,
  EmptyExample,
  ExampleNotInTeacherFibre,
  InvalidExplanation,
  UnforcedActionAtL,
  InvalidOverride,
  UnknownWord,
  ParseError,
  ReferenceError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the engine carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnboundedHomSet: return "UnboundedHomSet";
    case ErrorCode::VertexMismatch: return "VertexMismatch";
    case ErrorCode::NotComposable: return "NotComposable";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::NotAFibration: return "NotAFibration";
    case ErrorCode::MissingEdgeAction: return "MissingEdgeAction";
    case ErrorCode::DiagramOutsideLanguage: return "DiagramOutsideLanguage";
    case ErrorCode::LanguageMismatch: return "LanguageMismatch";
    case ErrorCode::FibreNotEmpty: return "FibreNotEmpty";
    case ErrorCode::EmptyExample: return "EmptyExample";
    case ErrorCode::ExampleNotInTeacherFibre: return "ExampleNotInTeacherFibre";
    case ErrorCode::InvalidExplanation: return "InvalidExplanation";
    case ErrorCode::UnforcedActionAtL: return "UnforcedActionAtL";
    case ErrorCode::InvalidOverride: return "InvalidOverride";
    case ErrorCode::UnknownWord: return "UnknownWord";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ReferenceError: return "ReferenceError";
  }
  return "Unknown";
}

}  // namespace fiblang
