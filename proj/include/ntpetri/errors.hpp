#pragma once

#include <stdexcept>
#include <string>

namespace ntpetri {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Net construction / document semantics. Everything the builder or the
// parser can reject derives from SemanticError so callers may catch the
// whole family at once.
struct SemanticError : Error {
  using Error::Error;
};

struct DuplicateNameError : SemanticError {
  using SemanticError::SemanticError;
};

struct EmptyColorTableError : SemanticError {
  using SemanticError::SemanticError;
};

struct DanglingReferenceError : SemanticError {
  using SemanticError::SemanticError;
};

// Marking arithmetic.
struct NegativeTokensError : Error {
  using Error::Error;
};

// Transition semantics.
struct NotEnabledError : Error {
  using Error::Error;
};

// A custom transition payload broke its contract (delta outside the
// declared place sets, empty or oversized update set, underflow).
struct ContractViolationError : Error {
  using Error::Error;
};

// Partitions.
struct NotAPartitionError : Error {
  using Error::Error;
};

struct IndexOutOfRangeError : Error {
  using Error::Error;
};

struct InvalidPartitionError : Error {
  using Error::Error;
};

// Trace checking.
struct MismatchedStartError : Error {
  using Error::Error;
};

// Serialization.
struct SyntaxError : Error {
  SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg), line(line), column(column) {}
  std::size_t line = 0;
  std::size_t column = 0;
};

struct VersionError : Error {
  using Error::Error;
};

struct UnserializableTransitionError : Error {
  using Error::Error;
};

}  // namespace ntpetri
