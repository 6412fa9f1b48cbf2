#include "triage/core/error.hpp"

namespace triage {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kIoError: return "io_error";
    case ErrorCode::kEmptySpecs: return "empty_specs";
    case ErrorCode::kNoUsableFields: return "no_usable_fields";
    case ErrorCode::kAdapterError: return "adapter_error";
    case ErrorCode::kMissingNormTitle: return "missing_norm_title";
    case ErrorCode::kInvalidMatcherConfig: return "invalid_matcher_config";
    case ErrorCode::kMissingGoldLabel: return "missing_gold_label";
    case ErrorCode::kNonpositiveMaxPrice: return "nonpositive_max_price";
    case ErrorCode::kNonpositiveAverage: return "nonpositive_average";
    case ErrorCode::kRatingOutOfRange: return "rating_out_of_range";
    case ErrorCode::kNoApplicableIndicators: return "no_applicable_indicators";
    case ErrorCode::kUnresolvableMember: return "unresolvable_member";
    case ErrorCode::kInvalidScoringConfig: return "invalid_scoring_config";
    case ErrorCode::kNoLabeledOffers: return "no_labeled_offers";
    case ErrorCode::kMissingPrerequisite: return "missing_prerequisite";
    case ErrorCode::kConfigInvalid: return "config_invalid";
    case ErrorCode::kUnknownOffer: return "unknown_offer";
    case ErrorCode::kUnknownCluster: return "unknown_cluster";
    case ErrorCode::kRetiredCluster: return "retired_cluster";
    case ErrorCode::kFewerThanTwo: return "fewer_than_two";
    case ErrorCode::kNoScores: return "no_scores";
    case ErrorCode::kWorkspaceLocked: return "workspace_locked";
    case ErrorCode::kWorkspaceMissing: return "workspace_missing";
  }
  return "unknown";
}

}  // namespace triage
