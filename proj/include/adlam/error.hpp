#pragma once

#include <stdexcept>
#include <string>

#include "adlam/term.hpp"

namespace adlam {

enum class ErrorCode {
  UnboundVariable,
  TypeMismatch,
  UnknownOp,
  LinearityShape,
  WidthMismatch,
  ShapeMismatch,
  NonFirstOrderType,
  GenerationExhausted,
  NoRuleApplies,
  ParseError,
  Internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnboundVariable: return "unbound-variable";
    case ErrorCode::TypeMismatch: return "type-mismatch";
    case ErrorCode::UnknownOp: return "unknown-op";
    case ErrorCode::LinearityShape: return "linearity-shape-error";
    case ErrorCode::WidthMismatch: return "width-mismatch";
    case ErrorCode::ShapeMismatch: return "shape-mismatch";
    case ErrorCode::NonFirstOrderType: return "non-first-order-type";
    case ErrorCode::GenerationExhausted: return "generation-exhausted";
    case ErrorCode::NoRuleApplies: return "no-rule-applies";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::Internal: return "internal-error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg, Loc loc = {})
      : std::runtime_error(format(code, msg, loc)), code_(code), loc_(loc) {}

  ErrorCode code() const { return code_; }
  Loc loc() const { return loc_; }

 private:
  static std::string format(ErrorCode code, const std::string& msg, Loc loc) {
    std::string s = std::string(error_code_name(code)) + ": " + msg;
    if (loc.line > 0) s += " (line " + std::to_string(loc.line) + ", col " + std::to_string(loc.col) + ")";
    return s;
  }

  ErrorCode code_;
  Loc loc_;
};

}  // namespace adlam
