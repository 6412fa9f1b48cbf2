#include "triage/core/validate.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "triage/core/json_codec.hpp"

namespace triage {
namespace {

constexpr std::array<std::string_view, 14> kKnownFields = {
    "platform",       "offer_id",        "title",
    "description",    "price",           "seller",
    "origin_country", "payment_methods", "quantity_available",
    "category",       "listed_at",       "attributes",
    "unit_quantity",  "normalized_price"};

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// Strings are trimmed; integers are accepted for id-like fields.
std::optional<std::string> text_field(const Json& obj, const char* name) {
  if (!obj.is_object()) return std::nullopt;
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return trim(it->get<std::string>());
  if (it->is_number_integer()) return it->dump();
  return std::nullopt;
}

std::optional<Decimal> decimal_field(const Json& obj, const char* name) {
  if (!obj.is_object()) return std::nullopt;
  auto it = obj.find(name);
  if (it == obj.end()) return std::nullopt;
  if (it->is_string()) {
    std::string s = trim(it->get<std::string>());
    // Accept a lone comma as decimal separator ("80,00").
    if (s.find('.') == std::string::npos) std::replace(s.begin(), s.end(), ',', '.');
    return Decimal::parse(s);
  }
  if (it->is_number()) return Decimal::parse(it->dump());
  return std::nullopt;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool all_alpha(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

}  // namespace

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kMissingTitle: return "missing_title";
    case RejectReason::kMissingOrNonpositivePrice: return "missing_or_nonpositive_price";
    case RejectReason::kInvalidCurrency: return "invalid_currency";
    case RejectReason::kInvalidRatingRange: return "invalid_rating_range";
    case RejectReason::kMissingIdentity: return "missing_identity";
    case RejectReason::kDuplicateKey: return "duplicate_key";
    case RejectReason::kMissingRequiredField: return "missing_required_field";
    case RejectReason::kExcludedByRule: return "excluded_by_rule";
  }
  return "unknown";
}

std::optional<OfferKey> candidate_key(const OfferCandidate& candidate) {
  auto platform = text_field(candidate.record, "platform");
  auto id = text_field(candidate.record, "offer_id");
  if (!platform || !id || platform->empty() || id->empty()) return std::nullopt;
  return OfferKey{*platform, *id};
}

ValidationResult validate_offer(const OfferCandidate& candidate) {
  const Json& rec = candidate.record;
  if (!rec.is_object()) {
    return Rejection{RejectReason::kMissingTitle, "record is not an object"};
  }

  Offer offer;
  auto title = text_field(rec, "title");
  if (!title || title->empty()) {
    return Rejection{RejectReason::kMissingTitle, "title missing or empty"};
  }
  offer.title = *title;

  const Json price = rec.contains("price") ? rec.at("price") : Json();
  auto amount = decimal_field(price, "amount");
  if (!amount || !amount->is_positive()) {
    return Rejection{RejectReason::kMissingOrNonpositivePrice,
                     "price missing, malformed or not positive"};
  }
  offer.price_amount = *amount;

  auto currency = text_field(price, "currency");
  if (!currency || currency->size() != 3 || !all_alpha(upper(*currency))) {
    return Rejection{RejectReason::kInvalidCurrency, "currency is not a 3-letter code"};
  }
  offer.currency = upper(*currency);

  const Json seller = rec.contains("seller") ? rec.at("seller") : Json();
  if (seller.is_object()) {
    offer.seller_id = text_field(seller, "id").value_or("");
    auto it = seller.find("rating_percent");
    if (it != seller.end() && !it->is_null()) {
      if (!it->is_number()) {
        return Rejection{RejectReason::kInvalidRatingRange, "rating is not a number"};
      }
      double r = it->get<double>();
      if (!(r >= 0.0 && r <= 100.0)) {
        return Rejection{RejectReason::kInvalidRatingRange, "rating outside [0,100]"};
      }
      offer.seller_rating_percent = r;
    }
  }

  auto key = candidate_key(candidate);
  if (!key) {
    return Rejection{RejectReason::kMissingIdentity, "platform or offer_id missing"};
  }
  offer.key = *key;

  if (auto d = text_field(rec, "description"); d && !d->empty()) offer.description = *d;
  if (auto c = text_field(rec, "category"); c && !c->empty()) offer.category = *c;
  if (auto t = text_field(rec, "listed_at"); t && !t->empty()) offer.listed_at = *t;

  if (auto attrs = rec.find("attributes"); attrs != rec.end() && attrs->is_object()) {
    for (const auto& [k, v] : attrs->items()) {
      offer.attributes[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  for (const auto& [k, v] : rec.items()) {
    if (std::find(kKnownFields.begin(), kKnownFields.end(), k) != kKnownFields.end()) continue;
    if (offer.attributes.count(k)) continue;
    offer.attributes[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }

  if (auto o = text_field(rec, "origin_country"); o && !o->empty()) {
    std::string code = upper(*o);
    if (code.size() == 2 && all_alpha(code)) {
      offer.origin_country = code;
    } else {
      offer.attributes["origin_raw"] = *o;
    }
  }

  if (auto pm = rec.find("payment_methods"); pm != rec.end() && pm->is_array()) {
    for (const auto& m : *pm) {
      if (m.is_string() && !trim(m.get<std::string>()).empty()) {
        offer.payment_methods.push_back(trim(m.get<std::string>()));
      }
    }
  }

  if (auto q = rec.find("quantity_available");
      q != rec.end() && q->is_number_integer() && q->get<std::int64_t>() >= 0) {
    offer.quantity_available = q->get<std::int64_t>();
  }

  if (auto uq = rec.find("unit_quantity"); uq != rec.end() && uq->is_object()) {
    auto qty = decimal_field(*uq, "amount");
    auto unit = text_field(*uq, "unit");
    if (qty && qty->is_positive() && unit && !unit->empty()) {
      offer.unit_quantity = UnitQuantity{*qty, *unit};
      offer.normalized_price = Decimal::divide(offer.price_amount, *qty);
    }
  }
  return offer;
}

}  // namespace triage
