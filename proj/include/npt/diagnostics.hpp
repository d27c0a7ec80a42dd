#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace npt {

// Every failure the checker can report, including the eval-side budget guard.
enum class ErrorCode {
  AffinityViolation,
  GelFreshnessViolation,
  KindMismatch,
  UnboundVariable,
  NotAFunction,
  MotiveMismatch,
  UniverseExpected,
  TypeMismatch,
  IllFormedEntryType,
  DuplicateName,
  PositionNotAffine,
  CaptureViolation,
  NegativeOccurrence,
  NestedOccurrence,
  SyntaxError,
  UnboundName,
  AmbiguousBinderKind,
  BudgetExceeded,
  IoError,
};

const char* error_code_name(ErrorCode code);

struct Span {
  std::string file;
  int line = 0;  // 1-based; 0 means "no precise location"
  int col = 0;
  bool valid() const { return line > 0 && col > 0; }
};

struct Diagnostic {
  ErrorCode code;
  std::string message;
  Span span;
  std::string telescope;  // pretty-printed snapshot of the offending context, may be empty

  // "ERROR <code> <file>:<line>:<col> <message>"
  std::string render_text() const;
  // one JSON object per line: {"code":...,"file":...,"line":...,"col":...,"message":...}
  std::string render_structured() const;
};

// Internal unwind carrying a Diagnostic; public entry points catch it.
struct DiagError : std::runtime_error {
  Diagnostic diag;
  explicit DiagError(Diagnostic d) : std::runtime_error(d.render_text()), diag(std::move(d)) {}
};

[[noreturn]] void fail(ErrorCode code, std::string message, Span span = {},
                       std::string telescope = {});

}  // namespace npt
