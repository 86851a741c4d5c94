#include "qlevy/errors.hpp"

namespace qlevy {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidBasis: return "InvalidBasis";
    case Errc::EmptyLaw: return "EmptyLaw";
    case Errc::NegativeMass: return "NegativeMass";
    case Errc::MassSumNotOne: return "MassSumNotOne";
    case Errc::DuplicateAtom: return "DuplicateAtom";
    case Errc::BasisMismatch: return "BasisMismatch";
    case Errc::IrrationalSupport: return "IrrationalSupport";
    case Errc::ZeroOnPath: return "ZeroOnPath";
    case Errc::StepTooCoarse: return "StepTooCoarse";
    case Errc::NotSeparated: return "NotSeparated";
    case Errc::NonConvergent: return "NonConvergent";
    case Errc::NonpositiveTau: return "NonpositiveTau";
    case Errc::Diverged: return "Diverged";
    case Errc::NegativeMassBeyondTolerance: return "NegativeMassBeyondTolerance";
    case Errc::LimitNotSeparated: return "LimitNotSeparated";
    case Errc::TripletFailed: return "TripletFailed";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

TripletFailed::TripletFailed(std::size_t index, const Error& cause)
    : Error(Errc::TripletFailed, "member " + std::to_string(index) + ": " +
                                     std::string(cause.name()) + ": " + cause.what()),
      index_(index),
      cause_(cause.code()) {}

}  // namespace qlevy
