#pragma once

#include <stdexcept>
#include <string>

namespace dynmatch {

enum class Errc {
  DuplicateUtility,
  ZeroUtility,
  DiscountOutOfRange,
  UnknownAgentReference,
  InstanceTooLarge,
  InternalLatticeViolation,
  InfeasibleOffer,
  InfeasibleResponse,
  NoStationaryTail,
  NotStable,
  NoImprovingOffer,
  WorkerUnmatched,
  NoBoundary,
  ParseError,
  UsageError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicateUtility: return "DuplicateUtility";
    case Errc::ZeroUtility: return "ZeroUtility";
    case Errc::DiscountOutOfRange: return "DiscountOutOfRange";
    case Errc::UnknownAgentReference: return "UnknownAgentReference";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::InternalLatticeViolation: return "InternalLatticeViolation";
    case Errc::InfeasibleOffer: return "InfeasibleOffer";
    case Errc::InfeasibleResponse: return "InfeasibleResponse";
    case Errc::NoStationaryTail: return "NoStationaryTail";
    case Errc::NotStable: return "NotStable";
    case Errc::NoImprovingOffer: return "NoImprovingOffer";
    case Errc::WorkerUnmatched: return "WorkerUnmatched";
    case Errc::NoBoundary: return "NoBoundary";
    case Errc::ParseError: return "ParseError";
    case Errc::UsageError: return "UsageError";
  }
  return "Unknown";
}

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace dynmatch
