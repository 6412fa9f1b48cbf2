#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "triage/core/json_codec.hpp"
#include "triage/core/types.hpp"
#include "triage/core/validate.hpp"

namespace triage::ingest {

struct UnitPattern {
  std::string pattern;  // ECMAScript regex, capture group 1 = quantity
  std::string unit;
  std::regex compiled;
};

// Product-domain specific cleaning rules, shipped as data files.
struct TransformRuleSet {
  std::map<std::string, std::string> synonym_map;
  std::vector<UnitPattern> unit_patterns;
  std::map<std::string, std::string> size_map;
  std::vector<std::string> drop_if_missing;
  // attribute name -> value; offers carrying it are quarantined. Empty by
  // default (e.g. {"seller_type": "private"} to skip private sellers).
  std::map<std::string, std::string> exclude_if_attribute;

  static TransformRuleSet from_json(const Json& j);
  static TransformRuleSet load(const std::filesystem::path& path);
  Json to_json() const;
};

struct QuarantineEntry {
  OfferCandidate candidate;
  RejectReason reason;
  std::string detail;
};

void to_json(Json& j, const QuarantineEntry& e);
void from_json(const Json& j, QuarantineEntry& e);

struct CleanResult {
  std::vector<Offer> offers;
  std::vector<QuarantineEntry> quarantine;
};

// Lowercase, every non-alphanumeric ASCII byte becomes a separator, runs of
// separators collapse to one space, no leading or trailing space.
std::string normalize_text(std::string_view text);

// Longest-match-first replacement of synonym phrases on token boundaries.
// Keys are matched in normalized form.
std::string apply_synonyms(const std::string& normalized,
                           const std::map<std::string, std::string>& synonym_map);

Offer normalize_offer(const Offer& offer, const TransformRuleSet& rules);

// validate -> dedup (first valid occurrence wins) -> normalize -> rule-based
// drops. Every input lands in exactly one of the two outputs.
CleanResult clean(const std::vector<OfferCandidate>& candidates, const TransformRuleSet& rules);

}  // namespace triage::ingest
