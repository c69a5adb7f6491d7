#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace moduli {

enum class ErrorCode {
  InvalidGraph,
  KindMismatch,
  ForbiddenCollapse,
  NoSuchEdge,
  NotInfinityVertex,
  NothingToCollapse,
  DuplicateLegLabel,
  ForbiddenCut,
  NoSuchLeg,
  CannotForgetRoot,
  MinimumMarkings,
  TooLarge,
  NoColoredVertex,
  Disconnected,
  MissingArity,
  CapExceeded,
  CurvedMorphismUnsupported,
  DegenerateQDE,
  InvalidAction,
  EmptySector,
  RankUnsupported,
  NonPositivePairing,
  UnstableSector,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::ForbiddenCollapse: return "ForbiddenCollapse";
    case ErrorCode::NoSuchEdge: return "NoSuchEdge";
    case ErrorCode::NotInfinityVertex: return "NotInfinityVertex";
    case ErrorCode::NothingToCollapse: return "NothingToCollapse";
    case ErrorCode::DuplicateLegLabel: return "DuplicateLegLabel";
    case ErrorCode::ForbiddenCut: return "ForbiddenCut";
    case ErrorCode::NoSuchLeg: return "NoSuchLeg";
    case ErrorCode::CannotForgetRoot: return "CannotForgetRoot";
    case ErrorCode::MinimumMarkings: return "MinimumMarkings";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoColoredVertex: return "NoColoredVertex";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::MissingArity: return "MissingArity";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::CurvedMorphismUnsupported: return "CurvedMorphismUnsupported";
    case ErrorCode::DegenerateQDE: return "DegenerateQDE";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::EmptySector: return "EmptySector";
    case ErrorCode::RankUnsupported: return "RankUnsupported";
    case ErrorCode::NonPositivePairing: return "NonPositivePairing";
    case ErrorCode::UnstableSector: return "UnstableSector";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace moduli
