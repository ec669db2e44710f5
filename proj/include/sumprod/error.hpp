#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumprod {

enum class ErrorCode {
  InvalidSpec,
  EvenCharacteristic,
  NotPrime,
  BoundExceeded,
  FieldMismatch,
  DivisionByZero,
  VariableMismatch,
  DenominatorVanishes,
  NotCertified,
  BadCharacteristic,
  ExcludedPoint,
  NotInTable,
  ZeroAlpha,
  NotCovered,
  OddLength,
  NoSquareRootOfMinusOne,
  FieldTooLarge,
  UnsupportedLength,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::VariableMismatch: return "VariableMismatch";
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::BadCharacteristic: return "BadCharacteristic";
    case ErrorCode::ExcludedPoint: return "ExcludedPoint";
    case ErrorCode::NotInTable: return "NotInTable";
    case ErrorCode::ZeroAlpha: return "ZeroAlpha";
    case ErrorCode::NotCovered: return "NotCovered";
    case ErrorCode::OddLength: return "OddLength";
    case ErrorCode::NoSquareRootOfMinusOne: return "NoSquareRootOfMinusOne";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::UnsupportedLength: return "UnsupportedLength";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Domain error raised by every sumprod operation. The code is stable and is
/// what callers (and the CLI) branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace sumprod
