#include "triage/ingest/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <variant>

#include "triage/core/error.hpp"

namespace triage::ingest {
namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

std::vector<std::string> split_tokens(const std::string& normalized) {
  std::vector<std::string> out;
  std::istringstream in(normalized);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct UnitMatch {
  std::size_t position;
  Decimal amount;
  std::string unit;
};

std::vector<UnitMatch> find_units(const std::string& text, const std::vector<UnitPattern>& patterns) {
  std::vector<UnitMatch> found;
  for (const auto& p : patterns) {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), p.compiled);
         it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      if (m.size() < 2 || !m[1].matched) continue;
      std::string qty = m[1].str();
      if (qty.find('.') == std::string::npos) std::replace(qty.begin(), qty.end(), ',', '.');
      auto amount = Decimal::parse(qty);
      if (!amount || !amount->is_positive()) continue;
      found.push_back(UnitMatch{static_cast<std::size_t>(m.position(0)), *amount, p.unit});
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const UnitMatch& a, const UnitMatch& b) { return a.position < b.position; });
  return found;
}

bool field_missing(const Offer& o, const std::string& field) {
  if (field == "description") return !o.description;
  if (field == "category") return !o.category;
  if (field == "listed_at") return !o.listed_at;
  if (field == "origin_country") return !o.origin_country;
  if (field == "seller_id") return o.seller_id.empty();
  if (field == "seller_rating_percent") return !o.seller_rating_percent;
  if (field == "payment_methods") return o.payment_methods.empty();
  if (field == "quantity_available") return !o.quantity_available;
  if (field == "unit_quantity") return !o.unit_quantity;
  return o.attribute(field) == nullptr;
}

}  // namespace

TransformRuleSet TransformRuleSet::from_json(const Json& j) {
  TransformRuleSet rules;
  try {
    rules.synonym_map = j.value("synonym_map", std::map<std::string, std::string>{});
    rules.size_map = j.value("size_map", std::map<std::string, std::string>{});
    rules.drop_if_missing = j.value("drop_if_missing", std::vector<std::string>{});
    rules.exclude_if_attribute =
        j.value("exclude_if_attribute", std::map<std::string, std::string>{});
    for (const auto& p : j.value("unit_patterns", Json::array())) {
      UnitPattern up;
      up.pattern = p.at("pattern").get<std::string>();
      up.unit = p.at("unit").get<std::string>();
      up.compiled = std::regex(up.pattern, std::regex::ECMAScript | std::regex::icase);
      if (up.compiled.mark_count() < 1) {
        throw Error(ErrorCode::kConfigInvalid,
                    "unit pattern '" + up.pattern + "' needs a capture group for the quantity");
      }
      rules.unit_patterns.push_back(std::move(up));
    }
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kConfigInvalid, std::string("bad unit pattern: ") + e.what());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, std::string("bad rule set: ") + e.what());
  }

  // Canonical terms must be fixed points, otherwise replacement is not
  // confluent.
  std::map<std::string, std::string> normalized;
  for (const auto& [from, to] : rules.synonym_map) normalized[normalize_text(from)] = normalize_text(to);
  for (const auto& [from, to] : normalized) {
    auto it = normalized.find(to);
    if (it != normalized.end() && it->second != to) {
      throw Error(ErrorCode::kConfigInvalid,
                  "synonym target '" + to + "' is itself rewritten to '" + it->second + "'");
    }
  }
  for (const auto& [from, to] : rules.size_map) {
    auto it = rules.size_map.find(lower(to));
    if (it != rules.size_map.end() && it->second != to) {
      throw Error(ErrorCode::kConfigInvalid, "size target '" + to + "' is itself rewritten");
    }
  }
  return rules;
}

TransformRuleSet TransformRuleSet::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path));
}

Json TransformRuleSet::to_json() const {
  Json patterns = Json::array();
  for (const auto& p : unit_patterns) patterns.push_back(Json{{"pattern", p.pattern}, {"unit", p.unit}});
  return Json{{"synonym_map", synonym_map},
              {"unit_patterns", patterns},
              {"size_map", size_map},
              {"drop_if_missing", drop_if_missing},
              {"exclude_if_attribute", exclude_if_attribute}};
}

void to_json(Json& j, const QuarantineEntry& e) {
  j = Json{{"candidate", e.candidate.record},
           {"reason", to_string(e.reason)},
           {"detail", e.detail}};
}

void from_json(const Json& j, QuarantineEntry& e) {
  e.candidate.record = j.at("candidate");
  const std::string reason = j.at("reason").get<std::string>();
  static const RejectReason kAll[] = {
      RejectReason::kMissingTitle,       RejectReason::kMissingOrNonpositivePrice,
      RejectReason::kInvalidCurrency,    RejectReason::kInvalidRatingRange,
      RejectReason::kMissingIdentity,    RejectReason::kDuplicateKey,
      RejectReason::kMissingRequiredField, RejectReason::kExcludedByRule};
  bool found = false;
  for (auto r : kAll) {
    if (to_string(r) == reason) {
      e.reason = r;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::kParseError, "unknown quarantine reason '" + reason + "'");
  e.detail = j.value("detail", "");
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::string apply_synonyms(const std::string& normalized,
                           const std::map<std::string, std::string>& synonym_map) {
  if (synonym_map.empty()) return normalized;
  struct Phrase {
    std::vector<std::string> tokens;
    std::string replacement;
  };
  std::vector<Phrase> phrases;
  for (const auto& [from, to] : synonym_map) {
    auto toks = split_tokens(normalize_text(from));
    if (!toks.empty()) phrases.push_back(Phrase{std::move(toks), normalize_text(to)});
  }
  // Longer phrases first; "evening bag" must win over "bag".
  std::stable_sort(phrases.begin(), phrases.end(), [](const Phrase& a, const Phrase& b) {
    return a.tokens.size() > b.tokens.size();
  });

  auto tokens = split_tokens(normalized);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Phrase* hit = nullptr;
    for (const auto& p : phrases) {
      if (i + p.tokens.size() > tokens.size()) continue;
      if (std::equal(p.tokens.begin(), p.tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        hit = &p;
        break;
      }
    }
    if (hit) {
      if (!hit->replacement.empty()) out.push_back(hit->replacement);
      i += hit->tokens.size();
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  std::string joined;
  for (const auto& t : out) {
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  return joined;
}

Offer normalize_offer(const Offer& offer, const TransformRuleSet& rules) {
  Offer out = offer;
  out.attributes[std::string(kNormTitleAttr)] =
      apply_synonyms(normalize_text(offer.title), rules.synonym_map);

  if (!rules.unit_patterns.empty()) {
    auto matches = find_units(offer.title, rules.unit_patterns);
    if (offer.description) {
      for (auto& m : find_units(*offer.description, rules.unit_patterns)) matches.push_back(std::move(m));
    }
    if (!matches.empty() && !offer.unit_quantity) {
      const UnitMatch& first = matches.front();
      out.unit_quantity = UnitQuantity{first.amount, first.unit};
      out.normalized_price = Decimal::divide(offer.price_amount, first.amount);
      bool conflict = std::any_of(matches.begin() + 1, matches.end(), [&](const UnitMatch& m) {
        return !(m.amount == first.amount) || m.unit != first.unit;
      });
      if (conflict) out.attributes[std::string(kUnitAmbiguousAttr)] = "true";
    }
  }

  if (const std::string* size = offer.attribute(kSizeAttr); size && !rules.size_map.empty()) {
    std::string probe = lower(*size);
    probe.erase(0, probe.find_first_not_of(' '));
    probe.erase(probe.find_last_not_of(' ') + 1);
    if (auto it = rules.size_map.find(probe); it != rules.size_map.end()) {
      out.attributes[std::string(kSizeAttr)] = it->second;
    }
  }
  return out;
}

CleanResult clean(const std::vector<OfferCandidate>& candidates, const TransformRuleSet& rules) {
  CleanResult result;
  std::set<OfferKey> seen;
  for (const auto& candidate : candidates) {
    auto validated = validate_offer(candidate);
    if (auto* rejection = std::get_if<Rejection>(&validated)) {
      result.quarantine.push_back(QuarantineEntry{candidate, rejection->reason, rejection->detail});
      continue;
    }
    const Offer& offer = std::get<Offer>(validated);
    if (!seen.insert(dedup_key(offer)).second) {
      result.quarantine.push_back(
          QuarantineEntry{candidate, RejectReason::kDuplicateKey, offer.key.to_string()});
      continue;
    }
    Offer normalized = normalize_offer(offer, rules);

    auto missing = std::find_if(rules.drop_if_missing.begin(), rules.drop_if_missing.end(),
                                [&](const std::string& f) { return field_missing(normalized, f); });
    if (missing != rules.drop_if_missing.end()) {
      result.quarantine.push_back(
          QuarantineEntry{candidate, RejectReason::kMissingRequiredField, *missing});
      continue;
    }
    bool excluded = false;
    for (const auto& [attr, value] : rules.exclude_if_attribute) {
      const std::string* v = normalized.attribute(attr);
      if (v && *v == value) {
        result.quarantine.push_back(
            QuarantineEntry{candidate, RejectReason::kExcludedByRule, attr + "=" + value});
        excluded = true;
        break;
      }
    }
    if (excluded) continue;
    result.offers.push_back(std::move(normalized));
  }
  return result;
}

}  // namespace triage::ingest
