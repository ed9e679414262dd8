#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zkit {

enum class Errc {
  // algebra
  kInversionOfZero,
  kModulusMismatch,
  kNotPrime,
  kFieldTooSmall,
  kFieldTooLarge,
  kDuplicateAbscissa,
  kDivisionByZeroPolynomial,
  // circuit
  kSyntaxError,
  kUndeclaredSignal,
  kDoubleAssignment,
  kCyclicDependency,
  kUnassignedSignal,
  kUnknownTemplate,
  kMissingInput,
  kUnknownSignal,
  kAssertionFailed,
  kDimensionMismatch,
  // qap / pinocchio
  kNotSatisfying,
  // pairing
  kBackendMismatch,
  kPointNotOnCurve,
  // gadgets
  kIncompatibleField,
  kRangeViolation,
  kDivisorZero,
  // serialization
  kFormatError,
  kDigestMismatch,
  // protocols
  kDuplicateLeaf,
  kInsufficientStake,
  kWrongPhase,
  kInvalidProof,
  kBidTooLow,
  kSameBidderTwice,
  kWrongPayer,
  kDeadlinePassed,
  kDuplicateCommit,
  kSeedCommitMismatch,
  kUnknownPlayer,
  kUnknownLeaf,
  kTreeFull,
  kWrongPayment,
  kReplayDiverged,
};

std::string_view errc_name(Errc code);

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// The single exception type thrown by the library. `code()` identifies the
/// failure; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Error(Errc code, const std::string& message, SourceLocation where);

  Errc code() const noexcept { return code_; }
  const std::optional<SourceLocation>& location() const noexcept {
    return location_;
  }

 private:
  Errc code_;
  std::optional<SourceLocation> location_;
};

}  // namespace zkit
