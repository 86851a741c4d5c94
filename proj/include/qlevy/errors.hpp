#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qlevy {

/// Error names are part of the CLI contract: they are printed verbatim.
enum class Errc {
  InvalidArgument,
  InvalidBasis,
  EmptyLaw,
  NegativeMass,
  MassSumNotOne,
  DuplicateAtom,
  BasisMismatch,
  IrrationalSupport,
  ZeroOnPath,
  StepTooCoarse,
  NotSeparated,
  NonConvergent,
  NonpositiveTau,
  Diverged,
  NegativeMassBeyondTolerance,
  LimitNotSeparated,
  TripletFailed,
  ParseError,
  SchemaViolation,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

/// Raised by the sequence checkers when a member's triplet cannot be
/// extracted. `index` is 0-based.
class TripletFailed : public Error {
 public:
  TripletFailed(std::size_t index, const Error& cause);

  std::size_t index() const noexcept { return index_; }
  Errc cause() const noexcept { return cause_; }

 private:
  std::size_t index_;
  Errc cause_;
};

}  // namespace qlevy
