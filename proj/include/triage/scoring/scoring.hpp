#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "triage/core/decimal.hpp"
#include "triage/core/json_codec.hpp"
#include "triage/core/types.hpp"

namespace triage::scoring {

enum class CombinationMode {
  kWeightedSum,   // S = sum(w'_i * s_i)
  kDividedByCount,  // S = sum(w'_i * s_i) / n_applicable
};

std::string_view to_string(CombinationMode mode);

// Indicator names: price_band, price_vs_average, seller_rating, origin,
// boolean_trait:<trait>.
struct IndicatorSpec {
  std::string name;
  double weight = 0.0;
  Json parameters = Json::object();
};

struct ScoringConfig {
  CombinationMode mode = CombinationMode::kWeightedSum;
  std::vector<IndicatorSpec> indicators{{"price_band", 1.0, Json::object()}};
  // Confidence band below a cluster's maximum price.
  double band_fraction = 0.25;
  std::vector<std::string> risk_countries{"CN"};
  double risk_score = 0.5;

  // Throws kInvalidScoringConfig.
  void validate() const;
  static ScoringConfig from_json(const Json& j);
  Json to_json() const;
  // "fnv1a64:<hex>" over the canonical JSON form.
  std::string fingerprint() const;
};

// Applicable score or not_applicable (nullopt).
using IndicatorValue = std::optional<double>;

// min(price / (max_price * (1 - band_fraction)), 1), computed on the exact
// fraction. Throws kNonpositiveMaxPrice.
double score_price_band(const Decimal& price, const Decimal& max_price_in_cluster,
                        double band_fraction);
// min(price / average, 1). The average is passed as sum and count so it stays
// exact. Throws kNonpositiveAverage.
double score_price_vs_average(const Decimal& price, const Decimal& price_sum, std::int64_t count);
double score_price_vs_average(const Decimal& price, const Decimal& average);
// rating / 100. Throws kRatingOutOfRange.
IndicatorValue score_seller_rating(std::optional<double> rating_percent);
IndicatorValue score_origin(const std::optional<std::string>& country,
                            const std::vector<std::string>& risk_countries, double risk_score);
// Trust orientation: an observed counterfeit trait lowers trust to 0.
double score_boolean_trait(bool present);

// Named trait predicates over one offer. Parameters come from the indicator
// entry. Known traits: dubious_payment {methods}, missing_product_info,
// missing_seller_info, bulk_quantity {min_quantity}, title_keyword {keywords}.
bool trait_present(const std::string& trait, const Offer& offer, const Json& parameters);

struct Composite {
  std::map<std::string, double> indicator_scores;  // applicable only
  std::map<std::string, double> weights;           // renormalized over applicable
  double composite = 0.0;
};

// Renormalizes the configured weights over applicable indicators and
// combines. Throws kNoApplicableIndicators.
Composite composite_score(const std::map<std::string, IndicatorValue>& indicator_scores,
                          const ScoringConfig& cfg);
// Recombines stored scores with stored (already renormalized) weights.
double combine(const std::map<std::string, double>& indicator_scores,
               const std::map<std::string, double>& weights, CombinationMode mode);

// One breakdown per member, in member order. Price indicators compare
// against members sharing currency and unit (normalized price when a unit
// is known); a group of one makes them not applicable.
// Throws kUnresolvableMember, kNoApplicableIndicators. When `unscored` is
// given, members without any applicable indicator are listed there and
// skipped instead.
std::vector<ScoreBreakdown> score_cluster(const Cluster& cluster,
                                          const std::map<OfferKey, Offer>& offers,
                                          const ScoringConfig& cfg, const Timestamp& scored_at,
                                          std::vector<OfferKey>* unscored = nullptr);

}  // namespace triage::scoring
