#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smoothring {

enum class ErrorKind {
  ArityMismatch,
  NonFiniteResult,
  NoSamplePointsFound,
  ParallelismViolation,
  SourceMismatch,
  UnsupportedDenominator,
  CertificateRefuted,
  CertificateNotFound,
  EnumerationOverflow,
  RelationViolation,
  SyntaxError,
  ArityError,
  UnknownName,
  KindMismatch,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonFiniteResult: return "NonFiniteResult";
    case ErrorKind::NoSamplePointsFound: return "NoSamplePointsFound";
    case ErrorKind::ParallelismViolation: return "ParallelismViolation";
    case ErrorKind::SourceMismatch: return "SourceMismatch";
    case ErrorKind::UnsupportedDenominator: return "UnsupportedDenominator";
    case ErrorKind::CertificateRefuted: return "CertificateRefuted";
    case ErrorKind::CertificateNotFound: return "CertificateNotFound";
    case ErrorKind::EnumerationOverflow: return "EnumerationOverflow";
    case ErrorKind::RelationViolation: return "RelationViolation";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind and, for geometric
/// refutations, the point that refutes the claim.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::vector<double>> witness = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<std::vector<double>>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::optional<std::vector<double>> witness_;
};

}  // namespace smoothring
