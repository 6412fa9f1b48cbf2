#include "triage/evaluation/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "triage/core/error.hpp"

namespace triage::evaluation {
namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string threshold_key(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

}  // namespace

Classification classify(const std::vector<ScoreBreakdown>& scores, double threshold) {
  Classification out;
  for (const auto& s : scores) {
    if (s.composite < threshold) {
      out.flagged.insert(s.offer_ref);
    } else {
      out.reliable.insert(s.offer_ref);
    }
  }
  return out;
}

std::map<OfferKey, VerdictLabel> current_labels(const std::vector<Verdict>& verdicts) {
  std::map<OfferKey, VerdictLabel> current;
  for (const auto& v : verdicts) current[v.offer_ref] = v.label;
  return current;
}

EvalReport evaluate(const std::set<OfferKey>& flagged, const std::vector<Verdict>& verdicts,
                    double threshold) {
  EvalReport r;
  r.threshold = threshold;
  std::int64_t labeled = 0;
  for (const auto& [key, label] : current_labels(verdicts)) {
    if (label == VerdictLabel::kUnknown) continue;
    ++labeled;
    bool is_flagged = flagged.count(key) > 0;
    if (label == VerdictLabel::kCounterfeit) {
      ++r.labeled_counterfeit_count;
      if (is_flagged) {
        ++r.true_positives;
      } else {
        ++r.false_negatives;
      }
    } else if (is_flagged) {
      ++r.false_positives;
    }
  }
  if (labeled == 0) throw Error(ErrorCode::kNoLabeledOffers, "no offer carries a usable verdict");

  r.flagged_count = r.true_positives + r.false_positives;
  r.precision = r.flagged_count == 0
                    ? 1.0
                    : static_cast<double>(r.true_positives) / static_cast<double>(r.flagged_count);
  r.recall = r.labeled_counterfeit_count == 0
                 ? 1.0
                 : static_cast<double>(r.true_positives) /
                       static_cast<double>(r.labeled_counterfeit_count);
  double pr = r.precision + r.recall;
  r.f_measure = pr > 0.0 ? 2.0 * r.precision * r.recall / pr : 0.0;
  return r;
}

void to_json(Json& j, const ThresholdSweep& s) {
  j = Json{{"thresholds", s.thresholds}, {"reports", s.reports}};
}

void from_json(const Json& j, ThresholdSweep& s) {
  s.thresholds = j.at("thresholds").get<std::vector<double>>();
  s.reports = j.at("reports").get<std::vector<EvalReport>>();
}

void validate_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw Error(ErrorCode::kInvalidArgument, "no thresholds given");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "threshold outside [0,1]");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "thresholds must be strictly increasing");
    }
  }
}

std::vector<double> parse_thresholds(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad threshold '" + item + "'");
    }
  }
  validate_thresholds(out);
  return out;
}

ThresholdSweep sweep(const std::vector<ScoreBreakdown>& scores, const std::vector<Verdict>& verdicts,
                     const std::vector<double>& thresholds) {
  validate_thresholds(thresholds);
  ThresholdSweep out;
  out.thresholds = thresholds;
  for (double t : thresholds) out.reports.push_back(evaluate(classify(scores, t).flagged, verdicts, t));
  return out;
}

std::string sweep_csv(const ThresholdSweep& s) {
  std::string out = "threshold,recall,precision,f_measure\n";
  for (const auto& r : s.reports) {
    out += threshold_key(r.threshold) + "," + fixed(r.recall) + "," + fixed(r.precision) + "," +
           fixed(r.f_measure) + "\n";
  }
  return out;
}

void to_json(Json& j, const SellerRow& row) {
  Json fractions = Json::object();
  for (const auto& [t, f] : row.flagged_fraction_at) fractions[threshold_key(t)] = f;
  j = Json{{"seller_id", row.seller_id},
           {"clusters_present", row.clusters_present},
           {"offer_count", row.offer_count},
           {"mean_S", row.mean_s},
           {"min_S", row.min_s},
           {"flagged_fraction_at", fractions}};
}

std::vector<SellerRow> seller_report(const std::vector<ScoreBreakdown>& scores,
                                     const std::map<OfferKey, Offer>& offers,
                                     const std::vector<double>& thresholds) {
  struct Acc {
    std::set<std::string> clusters;
    std::vector<double> values;
  };
  std::map<std::string, Acc> by_seller;
  for (const auto& s : scores) {
    auto it = offers.find(s.offer_ref);
    if (it == offers.end()) continue;
    Acc& acc = by_seller[it->second.seller_id];
    acc.clusters.insert(s.cluster_id);
    acc.values.push_back(s.composite);
  }

  std::vector<SellerRow> rows;
  for (const auto& [seller, acc] : by_seller) {
    SellerRow row;
    row.seller_id = seller;
    row.clusters_present = static_cast<std::int64_t>(acc.clusters.size());
    row.offer_count = static_cast<std::int64_t>(acc.values.size());
    double sum = 0.0;
    for (double v : acc.values) sum += v;
    row.mean_s = sum / static_cast<double>(acc.values.size());
    row.min_s = *std::min_element(acc.values.begin(), acc.values.end());
    for (double t : thresholds) {
      auto below = std::count_if(acc.values.begin(), acc.values.end(), [t](double v) { return v < t; });
      row.flagged_fraction_at[t] = static_cast<double>(below) / static_cast<double>(acc.values.size());
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const SellerRow& a, const SellerRow& b) {
    if (a.mean_s != b.mean_s) return a.mean_s < b.mean_s;
    return a.seller_id < b.seller_id;
  });
  return rows;
}

std::string seller_csv(const std::vector<SellerRow>& rows) {
  std::string out = "seller_id,clusters_present,offer_count,mean_S,min_S";
  std::vector<double> thresholds;
  if (!rows.empty()) {
    for (const auto& [t, f] : rows.front().flagged_fraction_at) {
      thresholds.push_back(t);
      out += ",flagged_at_" + threshold_key(t);
    }
  }
  out += "\n";
  for (const auto& r : rows) {
    out += r.seller_id + "," + std::to_string(r.clusters_present) + "," +
           std::to_string(r.offer_count) + "," + fixed(r.mean_s) + "," + fixed(r.min_s);
    for (double t : thresholds) out += "," + fixed(r.flagged_fraction_at.at(t));
    out += "\n";
  }
  return out;
}

}  // namespace triage::evaluation
