#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace futra {

// 1-based position of a construct's first token plus its byte length.
struct SourceSpan {
  int line = 1;
  int col = 1;
  int byte_len = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ErrorCode {
  LexError,
  ParseError,
  IndentationError,
  UnsupportedSyntax,
  UseBeforeAssign,
  UnknownCall,
  ReturnNotTerminal,
  UnknownIdentifier,
  ArityError,
  SideEffectPosition,
  TypeError,
  ShapeMismatch,
  RaggedMatrix,
  Singular,
  AxisOutOfRange,
  NegativeExtent,
  RowOutOfRange,
  DepthLimit,
  IoError,
  UsageError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IndentationError: return "IndentationError";
    case ErrorCode::UnsupportedSyntax: return "UnsupportedSyntax";
    case ErrorCode::UseBeforeAssign: return "UseBeforeAssign";
    case ErrorCode::UnknownCall: return "UnknownCall";
    case ErrorCode::ReturnNotTerminal: return "ReturnNotTerminal";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::SideEffectPosition: return "SideEffectPosition";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RaggedMatrix: return "RaggedMatrix";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::AxisOutOfRange: return "AxisOutOfRange";
    case ErrorCode::NegativeExtent: return "NegativeExtent";
    case ErrorCode::RowOutOfRange: return "RowOutOfRange";
    case ErrorCode::DepthLimit: return "DepthLimit";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Error";
}

// Every diagnostic carries the span of the construct that produced it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, SourceSpan span, std::string message)
      : std::runtime_error(format(code, span, message)),
        code_(code),
        span_(span),
        message_(std::move(message)) {}

  ErrorCode code() const { return code_; }
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  static std::string format(ErrorCode code, SourceSpan span, const std::string& msg) {
    return std::string("error[") + error_code_name(code) + "] at " +
           std::to_string(span.line) + ":" + std::to_string(span.col) + ": " + msg;
  }

  ErrorCode code_;
  SourceSpan span_;
  std::string message_;
};

}  // namespace futra
