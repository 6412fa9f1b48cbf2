#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace triage {

// Machine-readable failure codes shared by every module. The string form is
// what the HTTP API and the CLI report.
enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kIoError,
  // querygen
  kEmptySpecs,
  kNoUsableFields,
  kAdapterError,
  // matching
  kMissingNormTitle,
  kInvalidMatcherConfig,
  // clustering
  kMissingGoldLabel,
  // scoring
  kNonpositiveMaxPrice,
  kNonpositiveAverage,
  kRatingOutOfRange,
  kNoApplicableIndicators,
  kUnresolvableMember,
  kInvalidScoringConfig,
  // evaluation
  kNoLabeledOffers,
  // workspace
  kMissingPrerequisite,
  kConfigInvalid,
  kUnknownOffer,
  kUnknownCluster,
  kRetiredCluster,
  kFewerThanTwo,
  kNoScores,
  kWorkspaceLocked,
  kWorkspaceMissing,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace triage
