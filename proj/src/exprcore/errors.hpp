#pragma once
// Error taxonomy shared by all modules. Every failure mode that callers are
// expected to branch on carries a distinct code; messages add context.
#include <stdexcept>
#include <string>

namespace gct {

enum class ErrCode {
  Inconclusive,          // symbolic and numeric zero-tests disagree
  DivisionByZeroExpr,    // denominator normalizes to the literal zero
  PoleAtPoint,           // evaluation retry budget exhausted
  RankDisagreement,      // symbolic vs numeric rank mismatch
  ChartMismatch,
  NotInvertible,         // triangular/linear map inversion failed
  NotBracketStabilizing,
  LinearSolveFailure,
  NotIntegrable,
  IntegralSearchExhausted,
  DeltaKGreaterThanOne,
  NotStronglyTransverse,
  NotExpressibleInInvariants,
  NormalFormViolation,
  ZTauNotOne,
  VerificationFailed,
  ReductionNotSFL,
  ProlongationInsufficient,
  CompensatorSolveFailed,
  InversionFailed,
  ParseError,
  BadInput,
};

struct GctError : std::runtime_error {
  ErrCode code;
  GctError(ErrCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline const char* err_name(ErrCode c) {
  switch (c) {
    case ErrCode::Inconclusive: return "Inconclusive";
    case ErrCode::DivisionByZeroExpr: return "DivisionByZeroExpr";
    case ErrCode::PoleAtPoint: return "PoleAtPoint";
    case ErrCode::RankDisagreement: return "RankDisagreement";
    case ErrCode::ChartMismatch: return "ChartMismatch";
    case ErrCode::NotInvertible: return "NotInvertible";
    case ErrCode::NotBracketStabilizing: return "NotBracketStabilizing";
    case ErrCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrCode::NotIntegrable: return "NotIntegrable";
    case ErrCode::IntegralSearchExhausted: return "IntegralSearchExhausted";
    case ErrCode::DeltaKGreaterThanOne: return "DeltaKGreaterThanOne";
    case ErrCode::NotStronglyTransverse: return "NotStronglyTransverse";
    case ErrCode::NotExpressibleInInvariants: return "NotExpressibleInInvariants";
    case ErrCode::NormalFormViolation: return "NormalFormViolation";
    case ErrCode::ZTauNotOne: return "ZTauNotOne";
    case ErrCode::VerificationFailed: return "VerificationFailed";
    case ErrCode::ReductionNotSFL: return "ReductionNotSFL";
    case ErrCode::ProlongationInsufficient: return "ProlongationInsufficient";
    case ErrCode::CompensatorSolveFailed: return "CompensatorSolveFailed";
    case ErrCode::InversionFailed: return "InversionFailed";
    case ErrCode::ParseError: return "ParseError";
    case ErrCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace gct
