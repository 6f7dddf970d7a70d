#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synpoly {

enum class ErrorKind {
  MalformedLine,
  MissingSentId,
  NonTreeStructure,
  UnknownRelation,
  MissingTranslation,
  SplitMismatch,
  ModeMismatch,
  EmptySet,
  DegenerateMatrix,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::MissingSentId: return "MissingSentId";
    case ErrorKind::NonTreeStructure: return "NonTreeStructure";
    case ErrorKind::UnknownRelation: return "UnknownRelation";
    case ErrorKind::MissingTranslation: return "MissingTranslation";
    case ErrorKind::SplitMismatch: return "SplitMismatch";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Input errors come from the data a caller supplied; everything else
/// signals a broken internal invariant.
constexpr bool is_input_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ModeMismatch:
    case ErrorKind::EmptySet:
      return false;
    default:
      return true;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace synpoly
