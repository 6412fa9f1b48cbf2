#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triage/core/decimal.hpp"

namespace triage {

// ISO-8601 UTC timestamp text, e.g. "2026-10-15T08:30:00Z".
using Timestamp = std::string;
using Clock = std::function<Timestamp()>;

Timestamp utc_now();
Clock system_clock();
Clock fixed_clock(Timestamp at);

// Identity of a listing: the same offer_id may exist on several platforms.
struct OfferKey {
  std::string platform;
  std::string offer_id;

  std::string to_string() const { return platform + ":" + offer_id; }
  friend auto operator<=>(const OfferKey&, const OfferKey&) = default;
};

struct ProductSpec {
  std::string spec_id;
  std::string manufacturer;
  std::string product_name;
  std::string product_type;
  std::vector<std::string> product_codes;

  friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

struct UnitQuantity {
  Decimal amount;
  std::string unit;

  friend bool operator==(const UnitQuantity&, const UnitQuantity&) = default;
};

struct Offer {
  OfferKey key;
  std::string title;
  std::optional<std::string> description;
  Decimal price_amount;
  std::string currency;
  std::string seller_id;
  std::optional<double> seller_rating_percent;
  std::optional<std::string> origin_country;
  std::vector<std::string> payment_methods;
  std::optional<std::int64_t> quantity_available;
  std::optional<std::string> category;
  std::optional<Timestamp> listed_at;
  std::map<std::string, std::string> attributes;
  std::optional<UnitQuantity> unit_quantity;
  std::optional<Decimal> normalized_price;

  const std::string* attribute(std::string_view name) const {
    auto it = attributes.find(std::string(name));
    return it == attributes.end() ? nullptr : &it->second;
  }

  friend bool operator==(const Offer&, const Offer&) = default;
};

// Canonical attribute names written by ingest and querygen.
inline constexpr std::string_view kNormTitleAttr = "norm_title";
inline constexpr std::string_view kSizeAttr = "size";
inline constexpr std::string_view kUnitAmbiguousAttr = "unit_ambiguous";
inline constexpr std::string_view kQueryStrategyAttr = "query_strategy";
inline constexpr std::string_view kSpecRefsAttr = "spec_refs";

enum class Provenance { kAutomatic, kMerged };

struct Cluster {
  std::string cluster_id;
  std::vector<OfferKey> member_ids;  // sorted, unique
  std::string label;
  Provenance provenance = Provenance::kAutomatic;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct ScoreBreakdown {
  OfferKey offer_ref;
  std::string cluster_id;
  std::map<std::string, double> indicator_scores;
  std::map<std::string, double> weights;
  double composite = 0.0;
  Timestamp scored_at;
  std::string config_fingerprint;

  friend bool operator==(const ScoreBreakdown&, const ScoreBreakdown&) = default;
};

enum class VerdictLabel { kCounterfeit, kGenuine, kUnknown };

struct Verdict {
  OfferKey offer_ref;
  VerdictLabel label = VerdictLabel::kUnknown;
  std::string reviewer;
  std::optional<std::string> note;
  Timestamp decided_at;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct EvalReport {
  double threshold = 0.0;
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  std::int64_t flagged_count = 0;
  std::int64_t labeled_counterfeit_count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

std::string_view to_string(Provenance p);
std::string_view to_string(VerdictLabel label);
std::optional<Provenance> parse_provenance(std::string_view text);
std::optional<VerdictLabel> parse_verdict_label(std::string_view text);

}  // namespace triage
