#include "ilslab/error.hpp"

#include <utility>

namespace ilslab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotStrictQuotient: return "NotStrictQuotient";
    case ErrorKind::DegenerateScale: return "DegenerateScale";
    case ErrorKind::SolverTolerance: return "SolverTolerance";
    case ErrorKind::NotOnFiber: return "NotOnFiber";
    case ErrorKind::MixedBases: return "MixedBases";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::AdmissibilityViolated: return "AdmissibilityViolated";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::EmptyBall: return "EmptyBall";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnverifiedCertificate: return "UnverifiedCertificate";
    case ErrorKind::BadDims: return "BadDims";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

NotOnFiberError::NotOnFiberError(std::size_t index, double residual)
    : Error(ErrorKind::NotOnFiber,
            "point " + std::to_string(index) + " residual " + std::to_string(residual)),
      index_(index),
      residual_(residual) {}

EmptyBallError::EmptyBallError(std::size_t index)
    : Error(ErrorKind::EmptyBall, "point " + std::to_string(index) + " has no neighbor in ball"),
      index_(index) {}

ValidationError::ValidationError(std::string field, std::string reason, const std::string& detail)
    : Error(ErrorKind::ValidationError,
            field + ": " + reason + (detail.empty() ? std::string() : " (" + detail + ")")),
      field_(std::move(field)),
      reason_(std::move(reason)) {}

}  // namespace ilslab
