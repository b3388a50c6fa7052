#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ilslab {

enum class ErrorKind {
  RankDeficient,
  NotStrictQuotient,
  DegenerateScale,
  SolverTolerance,
  NotOnFiber,
  MixedBases,
  ZeroCoefficient,
  TooFewPoints,
  AdmissibilityViolated,
  BadExponent,
  EmptyBall,
  NotAdmissible,
  EmptyInput,
  UnverifiedCertificate,
  BadDims,
  ParseError,
  ValidationError,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. `kind()` is the
/// stable, machine-checkable discriminator; `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

class NotOnFiberError : public Error {
 public:
  NotOnFiberError(std::size_t index, double residual);

  std::size_t index() const noexcept { return index_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t index_;
  double residual_;
};

class EmptyBallError : public Error {
 public:
  explicit EmptyBallError(std::size_t index);

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Raised while loading instances. `field()` is a dotted path into the
/// document ("quotient.A", "base.points"), `reason()` a short tag such as
/// "RankDeficient" or "Duplicate".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, std::string reason, const std::string& detail = {});

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

}  // namespace ilslab
