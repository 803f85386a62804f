#include "dsent/error.hpp"

namespace dsent {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::MassNotOne: return "MassNotOne";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RowMassError: return "RowMassError";
    case ErrorCode::StationarityError: return "StationarityError";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::AlphaRange: return "AlphaRange";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::BadSequence: return "BadSequence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::IllConditionedSplit: return "IllConditionedSplit";
    case ErrorCode::RankToleranceFailure: return "RankToleranceFailure";
    case ErrorCode::REqualsEigenvalueModulus: return "REqualsEigenvalueModulus";
    case ErrorCode::ScalingNotConverged: return "ScalingNotConverged";
    case ErrorCode::WindowOverflow: return "WindowOverflow";
    case ErrorCode::CellBudgetExceeded: return "CellBudgetExceeded";
    case ErrorCode::NotErgodic: return "NotErgodic";
    case ErrorCode::NotMarkovEmbeddingOnRev: return "NotMarkovEmbeddingOnRev";
  }
  return "Unknown";
}

ErrorClass classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::EigenFailure:
    case ErrorCode::IllConditionedSplit:
    case ErrorCode::RankToleranceFailure:
    case ErrorCode::REqualsEigenvalueModulus:
    case ErrorCode::ScalingNotConverged:
      return ErrorClass::Numerical;
    case ErrorCode::WindowOverflow:
    case ErrorCode::CellBudgetExceeded:
      return ErrorClass::Budget;
    case ErrorCode::NotErgodic:
    case ErrorCode::NotMarkovEmbeddingOnRev:
      return ErrorClass::Hypothesis;
    default:
      return ErrorClass::Validation;
  }
}

}  // namespace dsent
