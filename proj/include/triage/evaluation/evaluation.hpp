#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "triage/core/json_codec.hpp"
#include "triage/core/types.hpp"

namespace triage::evaluation {

inline const std::vector<double> kDefaultThresholds{0.6, 0.7, 0.8, 0.9};

struct Classification {
  std::set<OfferKey> flagged;   // S < threshold
  std::set<OfferKey> reliable;  // S >= threshold
};

Classification classify(const std::vector<ScoreBreakdown>& scores, double threshold);

// Current label per offer; later entries supersede earlier ones.
std::map<OfferKey, VerdictLabel> current_labels(const std::vector<Verdict>& verdicts);

// Unknown labels count nowhere. Conventions: precision is 1 when no labeled
// offer is flagged, recall is 1 when nothing is labeled counterfeit, F is 0
// when P + R = 0. Throws kNoLabeledOffers.
EvalReport evaluate(const std::set<OfferKey>& flagged, const std::vector<Verdict>& verdicts,
                    double threshold);

struct ThresholdSweep {
  std::vector<double> thresholds;
  std::vector<EvalReport> reports;
};

void to_json(Json& j, const ThresholdSweep& s);
void from_json(const Json& j, ThresholdSweep& s);

// Thresholds must be strictly increasing and within [0,1].
void validate_thresholds(const std::vector<double>& thresholds);
std::vector<double> parse_thresholds(const std::string& csv);

ThresholdSweep sweep(const std::vector<ScoreBreakdown>& scores, const std::vector<Verdict>& verdicts,
                     const std::vector<double>& thresholds = kDefaultThresholds);

// threshold,recall,precision,f_measure
std::string sweep_csv(const ThresholdSweep& s);

struct SellerRow {
  std::string seller_id;
  std::int64_t clusters_present = 0;
  std::int64_t offer_count = 0;
  double mean_s = 0.0;
  double min_s = 0.0;
  std::map<double, double> flagged_fraction_at;
};

void to_json(Json& j, const SellerRow& row);

// Per-seller aggregates, ascending by mean S, ties by seller id. Scores
// whose offer is not in `offers` are skipped.
std::vector<SellerRow> seller_report(const std::vector<ScoreBreakdown>& scores,
                                     const std::map<OfferKey, Offer>& offers,
                                     const std::vector<double>& thresholds = kDefaultThresholds);

std::string seller_csv(const std::vector<SellerRow>& rows);

}  // namespace triage::evaluation
