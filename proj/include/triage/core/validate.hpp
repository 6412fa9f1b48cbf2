#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "triage/core/types.hpp"

namespace triage {

// A raw record as delivered by an adapter or a feed file, before cleaning.
// Layout follows the canonical offer record but any field may be missing or
// malformed.
struct OfferCandidate {
  nlohmann::json record;

  friend bool operator==(const OfferCandidate&, const OfferCandidate&) = default;
};

enum class RejectReason {
  kMissingTitle,
  kMissingOrNonpositivePrice,
  kInvalidCurrency,
  kInvalidRatingRange,
  kMissingIdentity,
  // Emitted by ingest, never by validate_offer.
  kDuplicateKey,
  kMissingRequiredField,
  kExcludedByRule,
};

std::string_view to_string(RejectReason reason);

struct Rejection {
  RejectReason reason;
  std::string detail;
};

using ValidationResult = std::variant<Offer, Rejection>;

// Checks the rules in order (title, price, currency, rating, identity) and
// reports the first one that fails.
ValidationResult validate_offer(const OfferCandidate& candidate);

inline const OfferKey& dedup_key(const Offer& offer) { return offer.key; }

// Key of a raw candidate, when it carries one. Used to dedup before
// validation so that a broken duplicate is still recognised as a duplicate.
std::optional<OfferKey> candidate_key(const OfferCandidate& candidate);

}  // namespace triage
