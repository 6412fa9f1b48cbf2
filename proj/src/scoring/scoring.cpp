#include "triage/scoring/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "triage/core/error.hpp"

namespace triage::scoring {
namespace {

constexpr std::string_view kTraitPrefix = "boolean_trait:";

const std::set<std::string>& known_traits() {
  static const std::set<std::string> traits = {"dubious_payment", "missing_product_info",
                                               "missing_seller_info", "bulk_quantity",
                                               "title_keyword"};
  return traits;
}

std::string fold(std::string_view s) {
  std::string out;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

struct PriceGroup {
  Decimal max;
  Decimal sum;
  std::int64_t count = 0;
};

// Currency plus unit label; offers with a known unit compare per unit.
std::string group_key(const Offer& o) {
  return o.currency + "|" + (o.unit_quantity ? o.unit_quantity->unit : std::string());
}

const Decimal& compared_price(const Offer& o) {
  return (o.unit_quantity && o.normalized_price) ? *o.normalized_price : o.price_amount;
}

}  // namespace

std::string_view to_string(CombinationMode mode) {
  return mode == CombinationMode::kWeightedSum ? "weighted_sum" : "paper_literal";
}

void ScoringConfig::validate() const {
  if (indicators.empty()) throw Error(ErrorCode::kInvalidScoringConfig, "no indicators enabled");
  double sum = 0.0;
  std::set<std::string> names;
  for (const auto& ind : indicators) {
    if (!names.insert(ind.name).second) {
      throw Error(ErrorCode::kInvalidScoringConfig, "indicator listed twice: " + ind.name);
    }
    bool known = ind.name == "price_band" || ind.name == "price_vs_average" ||
                 ind.name == "seller_rating" || ind.name == "origin";
    if (ind.name.rfind(kTraitPrefix, 0) == 0) {
      known = known_traits().count(ind.name.substr(kTraitPrefix.size())) > 0;
    }
    if (!known) throw Error(ErrorCode::kInvalidScoringConfig, "unknown indicator: " + ind.name);
    if (!(ind.weight >= 0.0 && ind.weight <= 1.0)) {
      throw Error(ErrorCode::kInvalidScoringConfig, "weight outside [0,1]: " + ind.name);
    }
    sum += ind.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidScoringConfig, "indicator weights must sum to 1");
  }
  if (!(band_fraction > 0.0 && band_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidScoringConfig, "band_fraction must be in (0,1)");
  }
  if (!(risk_score >= 0.0 && risk_score <= 1.0)) {
    throw Error(ErrorCode::kInvalidScoringConfig, "risk_score must be in [0,1]");
  }
}

ScoringConfig ScoringConfig::from_json(const Json& j) {
  ScoringConfig cfg;
  try {
    if (j.contains("combination_mode")) {
      auto mode = j.at("combination_mode").get<std::string>();
      if (mode == "weighted_sum") {
        cfg.mode = CombinationMode::kWeightedSum;
      } else if (mode == "paper_literal") {
        cfg.mode = CombinationMode::kDividedByCount;
      } else {
        throw Error(ErrorCode::kInvalidScoringConfig, "unknown combination_mode " + mode);
      }
    }
    if (j.contains("indicators")) {
      cfg.indicators.clear();
      for (const auto& ind : j.at("indicators")) {
        cfg.indicators.push_back(IndicatorSpec{ind.at("name").get<std::string>(),
                                               ind.at("weight").get<double>(),
                                               ind.value("parameters", Json::object())});
      }
    }
    if (j.contains("price_band")) {
      cfg.band_fraction = j.at("price_band").value("band_fraction", cfg.band_fraction);
    }
    if (j.contains("origin")) {
      cfg.risk_countries = j.at("origin").value("risk_countries", cfg.risk_countries);
      cfg.risk_score = j.at("origin").value("risk_score", cfg.risk_score);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidScoringConfig, std::string("bad scoring config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Json ScoringConfig::to_json() const {
  Json inds = Json::array();
  for (const auto& ind : indicators) {
    inds.push_back(Json{{"name", ind.name}, {"weight", ind.weight}, {"parameters", ind.parameters}});
  }
  return Json{{"combination_mode", to_string(mode)},
              {"indicators", inds},
              {"price_band", {{"band_fraction", band_fraction}}},
              {"origin", {{"risk_countries", risk_countries}, {"risk_score", risk_score}}}};
}

std::string ScoringConfig::fingerprint() const {
  return triage::fingerprint(to_json());
}

double score_price_band(const Decimal& price, const Decimal& max_price_in_cluster,
                        double band_fraction) {
  if (!max_price_in_cluster.is_positive()) {
    throw Error(ErrorCode::kNonpositiveMaxPrice, "cluster maximum price must be positive");
  }
  if (!price.is_positive()) throw Error(ErrorCode::kInvalidArgument, "price must be positive");
  const Decimal keep = Decimal::from_units(1, 0) - Decimal::from_double(band_fraction);
  Ratio raw = Decimal::ratio(price, max_price_in_cluster * keep);
  return raw.at_least_one() ? 1.0 : raw.to_double();
}

double score_price_vs_average(const Decimal& price, const Decimal& price_sum, std::int64_t count) {
  if (count <= 0 || !price_sum.is_positive()) {
    throw Error(ErrorCode::kNonpositiveAverage, "average price must be positive");
  }
  Ratio raw = Decimal::ratio(price * Decimal::from_units(count, 0), price_sum);
  return raw.at_least_one() ? 1.0 : raw.to_double();
}

double score_price_vs_average(const Decimal& price, const Decimal& average) {
  return score_price_vs_average(price, average, 1);
}

IndicatorValue score_seller_rating(std::optional<double> rating_percent) {
  if (!rating_percent) return std::nullopt;
  if (!(*rating_percent >= 0.0 && *rating_percent <= 100.0)) {
    throw Error(ErrorCode::kRatingOutOfRange, "seller rating outside [0,100]");
  }
  return *rating_percent / 100.0;
}

IndicatorValue score_origin(const std::optional<std::string>& country,
                            const std::vector<std::string>& risk_countries, double risk_score) {
  if (!country) return std::nullopt;
  bool risky = std::find(risk_countries.begin(), risk_countries.end(), *country) != risk_countries.end();
  return risky ? risk_score : 1.0;
}

double score_boolean_trait(bool present) { return present ? 0.0 : 1.0; }

bool trait_present(const std::string& trait, const Offer& offer, const Json& parameters) {
  if (trait == "dubious_payment") {
    auto methods = parameters.value("methods", std::vector<std::string>{"WesternUnion"});
    for (const auto& used : offer.payment_methods) {
      for (const auto& bad : methods) {
        if (!fold(bad).empty() && fold(used) == fold(bad)) return true;
      }
    }
    return false;
  }
  if (trait == "missing_product_info") return !offer.description;
  if (trait == "missing_seller_info") {
    return offer.seller_id.empty() || !offer.seller_rating_percent;
  }
  if (trait == "bulk_quantity") {
    auto min_quantity = parameters.value("min_quantity", std::int64_t{100});
    return offer.quantity_available && *offer.quantity_available >= min_quantity;
  }
  if (trait == "title_keyword") {
    auto keywords = parameters.value("keywords", std::vector<std::string>{});
    const std::string* norm = offer.attribute(kNormTitleAttr);
    std::string haystack = " " + (norm ? *norm : fold(offer.title)) + " ";
    for (const auto& kw : keywords) {
      if (!kw.empty() && haystack.find(" " + kw + " ") != std::string::npos) return true;
    }
    return false;
  }
  throw Error(ErrorCode::kInvalidScoringConfig, "unknown trait: " + trait);
}

double combine(const std::map<std::string, double>& indicator_scores,
               const std::map<std::string, double>& weights, CombinationMode mode) {
  double acc = 0.0;
  for (const auto& [name, s] : indicator_scores) {
    auto w = weights.find(name);
    if (w == weights.end()) continue;
    double product = w->second * s;
    acc = acc + product;
  }
  if (mode == CombinationMode::kDividedByCount && !indicator_scores.empty()) {
    acc = acc / static_cast<double>(indicator_scores.size());
  }
  return std::clamp(acc, 0.0, 1.0);
}

Composite composite_score(const std::map<std::string, IndicatorValue>& indicator_scores,
                          const ScoringConfig& cfg) {
  Composite out;
  double weight_sum = 0.0;
  for (const auto& ind : cfg.indicators) {
    auto it = indicator_scores.find(ind.name);
    if (it == indicator_scores.end() || !it->second) continue;
    out.indicator_scores[ind.name] = std::clamp(*it->second, 0.0, 1.0);
    out.weights[ind.name] = ind.weight;
    weight_sum += ind.weight;
  }
  if (out.indicator_scores.empty() || !(weight_sum > 0.0)) {
    throw Error(ErrorCode::kNoApplicableIndicators, "no applicable indicator for this offer");
  }
  for (auto& [name, w] : out.weights) w = w / weight_sum;
  out.composite = combine(out.indicator_scores, out.weights, cfg.mode);
  return out;
}

std::vector<ScoreBreakdown> score_cluster(const Cluster& cluster,
                                          const std::map<OfferKey, Offer>& offers,
                                          const ScoringConfig& cfg, const Timestamp& scored_at,
                                          std::vector<OfferKey>* unscored) {
  std::vector<const Offer*> members;
  members.reserve(cluster.member_ids.size());
  for (const auto& key : cluster.member_ids) {
    auto it = offers.find(key);
    if (it == offers.end()) {
      throw Error(ErrorCode::kUnresolvableMember,
                  "cluster " + cluster.cluster_id + " references unknown offer " + key.to_string());
    }
    members.push_back(&it->second);
  }

  std::map<std::string, PriceGroup> groups;
  for (const Offer* o : members) {
    auto [it, fresh] = groups.try_emplace(group_key(*o));
    PriceGroup& g = it->second;
    const Decimal& p = compared_price(*o);
    if (fresh || p > g.max) g.max = p;
    g.sum = fresh ? p : g.sum + p;
    ++g.count;
  }

  const std::string fingerprint = cfg.fingerprint();
  std::vector<ScoreBreakdown> out;
  out.reserve(members.size());
  for (const Offer* o : members) {
    const PriceGroup& g = groups.at(group_key(*o));
    const Decimal& p = compared_price(*o);
    std::map<std::string, IndicatorValue> values;
    for (const auto& ind : cfg.indicators) {
      if (ind.name == "price_band") {
        values[ind.name] = g.count > 1 ? IndicatorValue(score_price_band(p, g.max, cfg.band_fraction))
                                       : std::nullopt;
      } else if (ind.name == "price_vs_average") {
        values[ind.name] = g.count > 1 ? IndicatorValue(score_price_vs_average(p, g.sum, g.count))
                                       : std::nullopt;
      } else if (ind.name == "seller_rating") {
        values[ind.name] = score_seller_rating(o->seller_rating_percent);
      } else if (ind.name == "origin") {
        values[ind.name] = score_origin(o->origin_country, cfg.risk_countries, cfg.risk_score);
      } else {
        std::string trait = ind.name.substr(kTraitPrefix.size());
        values[ind.name] = score_boolean_trait(trait_present(trait, *o, ind.parameters));
      }
    }
    if (unscored != nullptr &&
        std::none_of(values.begin(), values.end(), [](const auto& kv) { return kv.second.has_value(); })) {
      unscored->push_back(o->key);
      continue;
    }
    Composite c = composite_score(values, cfg);
    ScoreBreakdown sb;
    sb.offer_ref = o->key;
    sb.cluster_id = cluster.cluster_id;
    sb.indicator_scores = std::move(c.indicator_scores);
    sb.weights = std::move(c.weights);
    sb.composite = c.composite;
    sb.scored_at = scored_at;
    sb.config_fingerprint = fingerprint;
    out.push_back(std::move(sb));
  }
  return out;
}

}  // namespace triage::scoring
