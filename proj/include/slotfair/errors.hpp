#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slotfair {

/// Every failure the library reports. The numeric value doubles as the CLI
/// exit code, so the values are part of the external contract.
enum class ErrorCode : int {
  parse_error = 10,
  schema_mismatch = 11,
  rank_out_of_range = 20,
  not_a_subset = 21,
  target_out_of_range = 30,
  precondition_unverified = 31,
  insufficient_divisibility = 32,
  bound_violation = 33,
  insufficient_patience = 40,
  not_monotonic = 41,
  undecided_at_precision = 42,
  not_a_reordering = 43,
  tower_too_large = 50,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::schema_mismatch: return "SchemaMismatch";
    case ErrorCode::rank_out_of_range: return "RankOutOfRange";
    case ErrorCode::not_a_subset: return "NotASubset";
    case ErrorCode::target_out_of_range: return "TargetOutOfRange";
    case ErrorCode::precondition_unverified: return "PreconditionUnverified";
    case ErrorCode::insufficient_divisibility: return "InsufficientDivisibility";
    case ErrorCode::bound_violation: return "BoundViolation";
    case ErrorCode::insufficient_patience: return "InsufficientPatience";
    case ErrorCode::not_monotonic: return "NotMonotonic";
    case ErrorCode::undecided_at_precision: return "UndecidedAtPrecision";
    case ErrorCode::not_a_reordering: return "NotAReordering";
    case ErrorCode::tower_too_large: return "TowerTooLarge";
  }
  return "Unknown";
}

}  // namespace slotfair
