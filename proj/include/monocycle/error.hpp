#pragma once

#include <stdexcept>
#include <string>

namespace monocycle {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Instance exceeds a hard size cap (DP order, exhaustive sweeps).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A constructive routine could not complete (exhaustion, splice failure).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Path enumeration hit its node budget before reaching a decision.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

enum class FormatErrorCode {
  kMalformedJson,
  kBadShape,
  kOutOfRange,
  kSelfLoop,
  kDuplicatePair,
  kBadColour,
};

inline const char* to_string(FormatErrorCode code) {
  switch (code) {
    case FormatErrorCode::kMalformedJson: return "malformed-json";
    case FormatErrorCode::kBadShape: return "bad-shape";
    case FormatErrorCode::kOutOfRange: return "out-of-range";
    case FormatErrorCode::kSelfLoop: return "self-loop";
    case FormatErrorCode::kDuplicatePair: return "duplicate-pair";
    case FormatErrorCode::kBadColour: return "bad-colour";
  }
  return "unknown";
}

class FormatError : public Error {
 public:
  FormatError(FormatErrorCode code, const std::string& what)
      : Error(std::string(to_string(code)) + ": " + what), code_(code) {}

  FormatErrorCode code() const { return code_; }

 private:
  FormatErrorCode code_;
};

}  // namespace monocycle
