#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ams {

enum class ErrorKind {
  NumericalBlowup,
  UnsupportedDimension,
  StepBudgetExhausted,
  IterationBudgetExhausted,
  OutOfDomain,
  DegenerateDensity,
  QuadratureFailure,
  NotASaddle,
  SolverDiverged,
  SolverFailed,
  InternalInconsistency,
  DegenerateSample,
  DegenerateSpectrum,
  InsufficientSweep,
  InvalidArgument,
  FileNotFound,
  ConfigError,
};

inline std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NumericalBlowup: return "NumericalBlowup";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::StepBudgetExhausted: return "StepBudgetExhausted";
    case ErrorKind::IterationBudgetExhausted: return "IterationBudgetExhausted";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DegenerateDensity: return "DegenerateDensity";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NotASaddle: return "NotASaddle";
    case ErrorKind::SolverDiverged: return "SolverDiverged";
    case ErrorKind::SolverFailed: return "SolverFailed";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::InsufficientSweep: return "InsufficientSweep";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace ams
