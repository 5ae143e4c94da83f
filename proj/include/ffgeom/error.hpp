#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffgeom {

enum class Errc {
  NotPrime,
  InvalidDegree,
  OrderOverflow,
  DivisionByZero,
  FieldMismatch,
  NotSubfieldOrder,
  DimensionMismatch,
  BadCongruence,
  TooLargeForExact,
  BudgetInfeasible,
  IndexMismatch,
  SolveFailed,
  NotIndependent,
  RangeViolation,
  CharTooSmall,
  SubBoxEmpty,
  ParameterViolation,
  FieldTooSmall,
  EvenCharacteristic,
  NotWeakNikodym,
  BudgetExceeded,
  PrimeTooSmall,
  MissingWitness,
  NotACover,
  InvariantViolation,
  ZeroDirection,
  ParseError,
  VerificationFailed,
};

std::string_view errc_name(Errc code);

/// Every precondition failure in the library surfaces as this exception.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ffgeom
