#include "npt/diagnostics.hpp"

#include <json.hpp>

namespace npt {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AffinityViolation: return "AffinityViolation";
    case ErrorCode::GelFreshnessViolation: return "GelFreshnessViolation";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NotAFunction: return "NotAFunction";
    case ErrorCode::MotiveMismatch: return "MotiveMismatch";
    case ErrorCode::UniverseExpected: return "UniverseExpected";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::IllFormedEntryType: return "IllFormedEntryType";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::PositionNotAffine: return "PositionNotAffine";
    case ErrorCode::CaptureViolation: return "CaptureViolation";
    case ErrorCode::NegativeOccurrence: return "NegativeOccurrence";
    case ErrorCode::NestedOccurrence: return "NestedOccurrence";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnboundName: return "UnboundName";
    case ErrorCode::AmbiguousBinderKind: return "AmbiguousBinderKind";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

std::string Diagnostic::render_text() const {
  std::string out = "ERROR ";
  out += error_code_name(code);
  out += " ";
  out += span.file.empty() ? "<input>" : span.file;
  out += ":" + std::to_string(span.line) + ":" + std::to_string(span.col);
  out += " " + message;
  return out;
}

std::string Diagnostic::render_structured() const {
  nlohmann::json j;
  j["code"] = error_code_name(code);
  j["file"] = span.file.empty() ? "<input>" : span.file;
  j["line"] = span.line;
  j["col"] = span.col;
  j["message"] = message;
  if (!telescope.empty()) j["telescope"] = telescope;
  return j.dump();
}

void fail(ErrorCode code, std::string message, Span span, std::string telescope) {
  throw DiagError(Diagnostic{code, std::move(message), std::move(span), std::move(telescope)});
}

}  // namespace npt
