#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eventua {

// Engine-wide error taxonomy. Every failure surfaced by the library is an
// EngineError carrying one of these kinds; messages are lowercase and
// self-contained so the CLI can print them verbatim.
enum class ErrorKind {
  Parse,
  Stratum,
  DuplicateName,
  Arity,
  UnknownIndividual,
  UnknownEvent,
  UnknownRelation,
  UnknownFunction,
  UnknownRule,
  UnknownName,
  UnknownViewEvent,
  UnboundVariable,
  ApplicationOutsideGraph,
  IncompleteFunction,
  NonNumericComparison,
  NonIndividualConcept,
  TypeMismatch,
  Shape,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Stratum: return "stratum violation";
    case ErrorKind::DuplicateName: return "duplicate name";
    case ErrorKind::Arity: return "arity mismatch";
    case ErrorKind::UnknownIndividual: return "unknown individual";
    case ErrorKind::UnknownEvent: return "unknown event";
    case ErrorKind::UnknownRelation: return "unknown relation";
    case ErrorKind::UnknownFunction: return "unknown function";
    case ErrorKind::UnknownRule: return "unknown rule";
    case ErrorKind::UnknownName: return "unknown name";
    case ErrorKind::UnknownViewEvent: return "unknown view event";
    case ErrorKind::UnboundVariable: return "unbound variable";
    case ErrorKind::ApplicationOutsideGraph: return "application outside graph";
    case ErrorKind::IncompleteFunction: return "incomplete function";
    case ErrorKind::NonNumericComparison: return "non-numeric comparison";
    case ErrorKind::NonIndividualConcept: return "non-individual concept";
    case ErrorKind::TypeMismatch: return "type mismatch";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures additionally carry the byte offset into the parsed text.
class ParseError : public EngineError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : EngineError(ErrorKind::Parse, message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw EngineError(kind, message);
}

}  // namespace eventua
