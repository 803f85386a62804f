#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsent {

enum class ErrorCode {
  // input validation
  NonPositiveWeight,
  MassNotOne,
  SpaceMismatch,
  ValueOutOfRange,
  DimensionMismatch,
  RowMassError,
  StationarityError,
  NegativeEntry,
  NotInvariant,
  AlphaRange,
  BadParameters,
  BadSequence,
  ParseError,
  UnknownEntry,
  // numerical
  EigenFailure,
  IllConditionedSplit,
  RankToleranceFailure,
  REqualsEigenvalueModulus,
  ScalingNotConverged,
  // resource budget
  WindowOverflow,
  CellBudgetExceeded,
  // hypothesis failures
  NotErgodic,
  NotMarkovEmbeddingOnRev,
};

std::string_view to_string(ErrorCode code);

enum class ErrorClass { Validation, Numerical, Budget, Hypothesis };

ErrorClass classify(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dsent
