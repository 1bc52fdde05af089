#pragma once

#include <stdexcept>
#include <string>

namespace galois {

enum class ErrorCode {
  MalformedElement,
  DescriptorMismatch,
  ParseError,
  UnknownRingConstructor,
  BasisNotSpanning,
  UnsupportedBase,
  NotProjectivePresentation,
  ShapeMismatch,
  NotRetract,
  OrderNotInvertible,
  NoRootOfUnity,
  NotAutomorphism,
  RelationViolated,
  RankMismatch,
  TraceNotInBase,
  NotEquivariant,
  NotAlgebraMap,
  InternalContradiction,
  RootOfUnityMissing,
  DegreeNotDivisible,
  NotAUnit,
  MissingUnitPresentation,
  OddDegreeUnit,
  PreconditionFailed,
  ResourceBound,
  NotCyclic,
  MissingPresentation,
  Undecided,
  Overflow,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedElement: return "MalformedElement";
    case ErrorCode::DescriptorMismatch: return "DescriptorMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownRingConstructor: return "UnknownRingConstructor";
    case ErrorCode::BasisNotSpanning: return "BasisNotSpanning";
    case ErrorCode::UnsupportedBase: return "UnsupportedBase";
    case ErrorCode::NotProjectivePresentation: return "NotProjectivePresentation";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotRetract: return "NotRetract";
    case ErrorCode::OrderNotInvertible: return "OrderNotInvertible";
    case ErrorCode::NoRootOfUnity: return "NoRootOfUnity";
    case ErrorCode::NotAutomorphism: return "NotAutomorphism";
    case ErrorCode::RelationViolated: return "RelationViolated";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::TraceNotInBase: return "TraceNotInBase";
    case ErrorCode::NotEquivariant: return "NotEquivariant";
    case ErrorCode::NotAlgebraMap: return "NotAlgebraMap";
    case ErrorCode::InternalContradiction: return "InternalContradiction";
    case ErrorCode::RootOfUnityMissing: return "RootOfUnityMissing";
    case ErrorCode::DegreeNotDivisible: return "DegreeNotDivisible";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::MissingUnitPresentation: return "MissingUnitPresentation";
    case ErrorCode::OddDegreeUnit: return "OddDegreeUnit";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::ResourceBound: return "ResourceBound";
    case ErrorCode::NotCyclic: return "NotCyclic";
    case ErrorCode::MissingPresentation: return "MissingPresentation";
    case ErrorCode::Undecided: return "Undecided";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace galois
