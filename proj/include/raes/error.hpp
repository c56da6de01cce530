#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace raes {

enum class ErrorKind {
  InvalidParameter,
  GenerationFailure,
  ConvergenceFailure,
  SizeLimit,
  ClassificationViolation,
  Precondition,
  Decode,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error thrown by the library. `kind()` is what callers switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::InvalidParameter, what) {}
};

class GenerationFailure : public Error {
 public:
  explicit GenerationFailure(const std::string& what)
      : Error(ErrorKind::GenerationFailure, what) {}
};

class SizeLimitError : public Error {
 public:
  explicit SizeLimitError(const std::string& what)
      : Error(ErrorKind::SizeLimit, what) {}
};

class ClassificationViolation : public Error {
 public:
  explicit ClassificationViolation(const std::string& what)
      : Error(ErrorKind::ClassificationViolation, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::Precondition, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorKind::Internal, what) {}
};

/// Decoding failure; `section()` names the part of the stream that was bad.
class DecodeError : public Error {
 public:
  DecodeError(std::string section, const std::string& what)
      : Error(ErrorKind::Decode, section + ": " + what),
        section_(std::move(section)) {}
  const std::string& section() const noexcept { return section_; }

 private:
  std::string section_;
};

}  // namespace raes
