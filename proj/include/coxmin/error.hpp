#pragma once

#include <stdexcept>
#include <string>

namespace coxmin {

enum class ErrorKind {
  InvalidInput,
  NotFinite,
  TooLarge,
  FieldTooSmall,
  MultiplicityMismatch,
  NoRegularPoint,
  NotAdmissible,
  ConstructionFailed,
  HypothesisFailed,
  WalkStuck,
  NotGoodPosition,
  IdentityFailed,
  SearchBound,
  TheoremViolation,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::FieldTooSmall: return "FieldTooSmall";
    case ErrorKind::MultiplicityMismatch: return "MultiplicityMismatch";
    case ErrorKind::NoRegularPoint: return "NoRegularPoint";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::WalkStuck: return "WalkStuck";
    case ErrorKind::NotGoodPosition: return "NotGoodPosition";
    case ErrorKind::IdentityFailed: return "IdentityFailed";
    case ErrorKind::SearchBound: return "SearchBound";
    case ErrorKind::TheoremViolation: return "TheoremViolation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit code. TheoremViolation, WalkStuck and
/// IdentityFailed mean a verified statement did not hold.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  bool is_violation() const noexcept {
    return kind_ == ErrorKind::TheoremViolation || kind_ == ErrorKind::WalkStuck ||
           kind_ == ErrorKind::IdentityFailed ||
           kind_ == ErrorKind::MultiplicityMismatch ||
           kind_ == ErrorKind::ConstructionFailed;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace coxmin
