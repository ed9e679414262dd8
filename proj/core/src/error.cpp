#include "zkit/error.hpp"

namespace zkit {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInversionOfZero: return "InversionOfZero";
    case Errc::kModulusMismatch: return "ModulusMismatch";
    case Errc::kNotPrime: return "NotPrime";
    case Errc::kFieldTooSmall: return "FieldTooSmall";
    case Errc::kFieldTooLarge: return "FieldTooLarge";
    case Errc::kDuplicateAbscissa: return "DuplicateAbscissa";
    case Errc::kDivisionByZeroPolynomial: return "DivisionByZeroPolynomial";
    case Errc::kSyntaxError: return "SyntaxError";
    case Errc::kUndeclaredSignal: return "UndeclaredSignal";
    case Errc::kDoubleAssignment: return "DoubleAssignment";
    case Errc::kCyclicDependency: return "CyclicDependency";
    case Errc::kUnassignedSignal: return "UnassignedSignal";
    case Errc::kUnknownTemplate: return "UnknownTemplate";
    case Errc::kMissingInput: return "MissingInput";
    case Errc::kUnknownSignal: return "UnknownSignal";
    case Errc::kAssertionFailed: return "AssertionFailed";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kNotSatisfying: return "NotSatisfying";
    case Errc::kBackendMismatch: return "BackendMismatch";
    case Errc::kPointNotOnCurve: return "PointNotOnCurve";
    case Errc::kIncompatibleField: return "IncompatibleField";
    case Errc::kRangeViolation: return "RangeViolation";
    case Errc::kDivisorZero: return "DivisorZero";
    case Errc::kFormatError: return "FormatError";
    case Errc::kDigestMismatch: return "DigestMismatch";
    case Errc::kDuplicateLeaf: return "DuplicateLeaf";
    case Errc::kInsufficientStake: return "InsufficientStake";
    case Errc::kWrongPhase: return "WrongPhase";
    case Errc::kInvalidProof: return "InvalidProof";
    case Errc::kBidTooLow: return "BidTooLow";
    case Errc::kSameBidderTwice: return "SameBidderTwice";
    case Errc::kWrongPayer: return "WrongPayer";
    case Errc::kDeadlinePassed: return "DeadlinePassed";
    case Errc::kDuplicateCommit: return "DuplicateCommit";
    case Errc::kSeedCommitMismatch: return "SeedCommitMismatch";
    case Errc::kUnknownPlayer: return "UnknownPlayer";
    case Errc::kUnknownLeaf: return "UnknownLeaf";
    case Errc::kTreeFull: return "TreeFull";
    case Errc::kWrongPayment: return "WrongPayment";
    case Errc::kReplayDiverged: return "ReplayDiverged";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

Error::Error(Errc code, const std::string& message, SourceLocation where)
    : std::runtime_error(std::string(errc_name(code)) + " at " +
                         std::to_string(where.line) + ":" +
                         std::to_string(where.column) + ": " + message),
      code_(code),
      location_(where) {}

}  // namespace zkit
