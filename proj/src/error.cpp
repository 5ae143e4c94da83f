#include "ffgeom/error.hpp"

namespace ffgeom {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::InvalidDegree: return "InvalidDegree";
    case Errc::OrderOverflow: return "OrderOverflow";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::NotSubfieldOrder: return "NotSubfieldOrder";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BadCongruence: return "BadCongruence";
    case Errc::TooLargeForExact: return "TooLargeForExact";
    case Errc::BudgetInfeasible: return "BudgetInfeasible";
    case Errc::IndexMismatch: return "IndexMismatch";
    case Errc::SolveFailed: return "SolveFailed";
    case Errc::NotIndependent: return "NotIndependent";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::CharTooSmall: return "CharTooSmall";
    case Errc::SubBoxEmpty: return "SubBoxEmpty";
    case Errc::ParameterViolation: return "ParameterViolation";
    case Errc::FieldTooSmall: return "FieldTooSmall";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::NotWeakNikodym: return "NotWeakNikodym";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::PrimeTooSmall: return "PrimeTooSmall";
    case Errc::MissingWitness: return "MissingWitness";
    case Errc::NotACover: return "NotACover";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::ZeroDirection: return "ZeroDirection";
    case Errc::ParseError: return "ParseError";
    case Errc::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

}  // namespace ffgeom
