#include "triage/core/json_codec.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

#include "triage/core/error.hpp"
#include "triage/core/validate.hpp"

namespace triage {
namespace {

const Json& required(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw Error(ErrorCode::kParseError, std::string("missing field '") + name + "'");
  }
  return *it;
}

}  // namespace

void to_json(Json& j, const OfferKey& key) {
  j = Json{{"platform", key.platform}, {"offer_id", key.offer_id}};
}

void from_json(const Json& j, OfferKey& key) {
  key.platform = required(j, "platform").get<std::string>();
  key.offer_id = required(j, "offer_id").get<std::string>();
}

void to_json(Json& j, const ProductSpec& spec) {
  j = Json{{"spec_id", spec.spec_id},
           {"manufacturer", spec.manufacturer},
           {"product_name", spec.product_name},
           {"product_type", spec.product_type},
           {"product_codes", spec.product_codes}};
}

void from_json(const Json& j, ProductSpec& spec) {
  spec.spec_id = required(j, "spec_id").get<std::string>();
  spec.manufacturer = j.value("manufacturer", "");
  spec.product_name = j.value("product_name", "");
  spec.product_type = j.value("product_type", "");
  spec.product_codes = j.value("product_codes", std::vector<std::string>{});
  if (spec.product_name.empty() && spec.product_type.empty() && spec.product_codes.empty()) {
    throw Error(ErrorCode::kParseError,
                "product spec '" + spec.spec_id + "' needs a name, type or code");
  }
}

void to_json(Json& j, const Offer& o) {
  j = Json::object();
  j["platform"] = o.key.platform;
  j["offer_id"] = o.key.offer_id;
  j["title"] = o.title;
  if (o.description) j["description"] = *o.description;
  j["price"] = Json{{"amount", o.price_amount.to_string()}, {"currency", o.currency}};
  Json seller{{"id", o.seller_id}};
  if (o.seller_rating_percent) seller["rating_percent"] = *o.seller_rating_percent;
  j["seller"] = std::move(seller);
  if (o.origin_country) j["origin_country"] = *o.origin_country;
  j["payment_methods"] = o.payment_methods;
  if (o.quantity_available) j["quantity_available"] = *o.quantity_available;
  if (o.category) j["category"] = *o.category;
  if (o.listed_at) j["listed_at"] = *o.listed_at;
  j["attributes"] = o.attributes;
  if (o.unit_quantity) {
    j["unit_quantity"] =
        Json{{"amount", o.unit_quantity->amount.to_string()}, {"unit", o.unit_quantity->unit}};
  }
  if (o.normalized_price) j["normalized_price"] = o.normalized_price->to_string();
}

void from_json(const Json& j, Offer& offer) {
  auto result = validate_offer(OfferCandidate{j});
  if (auto* rejection = std::get_if<Rejection>(&result)) {
    throw Error(ErrorCode::kParseError,
                "invalid offer: " + std::string(to_string(rejection->reason)));
  }
  offer = std::get<Offer>(std::move(result));
}

void to_json(Json& j, const Cluster& c) {
  j = Json{{"cluster_id", c.cluster_id},
           {"member_ids", c.member_ids},
           {"label", c.label},
           {"provenance", to_string(c.provenance)}};
}

void from_json(const Json& j, Cluster& c) {
  c.cluster_id = required(j, "cluster_id").get<std::string>();
  c.member_ids = required(j, "member_ids").get<std::vector<OfferKey>>();
  c.label = j.value("label", "");
  auto p = parse_provenance(j.value("provenance", "automatic"));
  if (!p) throw Error(ErrorCode::kParseError, "bad provenance");
  c.provenance = *p;
  if (c.member_ids.empty()) throw Error(ErrorCode::kParseError, "cluster without members");
}

void to_json(Json& j, const ScoreBreakdown& s) {
  j = Json{{"offer_ref", s.offer_ref},
           {"cluster_id", s.cluster_id},
           {"indicator_scores", s.indicator_scores},
           {"weights", s.weights},
           {"composite", s.composite},
           {"scored_at", s.scored_at},
           {"config_fingerprint", s.config_fingerprint}};
}

void from_json(const Json& j, ScoreBreakdown& s) {
  s.offer_ref = required(j, "offer_ref").get<OfferKey>();
  s.cluster_id = required(j, "cluster_id").get<std::string>();
  s.indicator_scores = required(j, "indicator_scores").get<std::map<std::string, double>>();
  s.weights = required(j, "weights").get<std::map<std::string, double>>();
  s.composite = required(j, "composite").get<double>();
  s.scored_at = j.value("scored_at", "");
  s.config_fingerprint = j.value("config_fingerprint", "");
}

void to_json(Json& j, const Verdict& v) {
  j = Json{{"offer_ref", v.offer_ref},
           {"label", to_string(v.label)},
           {"reviewer", v.reviewer},
           {"decided_at", v.decided_at}};
  if (v.note) j["note"] = *v.note;
}

void from_json(const Json& j, Verdict& v) {
  v.offer_ref = required(j, "offer_ref").get<OfferKey>();
  auto label = parse_verdict_label(required(j, "label").get<std::string>());
  if (!label) throw Error(ErrorCode::kParseError, "bad verdict label");
  v.label = *label;
  v.reviewer = j.value("reviewer", "");
  v.decided_at = j.value("decided_at", "");
  if (auto it = j.find("note"); it != j.end() && it->is_string()) {
    v.note = it->get<std::string>();
  } else {
    v.note.reset();
  }
}

void to_json(Json& j, const EvalReport& r) {
  j = Json{{"threshold", r.threshold},
           {"true_positives", r.true_positives},
           {"false_positives", r.false_positives},
           {"false_negatives", r.false_negatives},
           {"flagged_count", r.flagged_count},
           {"labeled_counterfeit_count", r.labeled_counterfeit_count},
           {"precision", r.precision},
           {"recall", r.recall},
           {"f_measure", r.f_measure}};
}

void from_json(const Json& j, EvalReport& r) {
  r.threshold = required(j, "threshold").get<double>();
  r.true_positives = required(j, "true_positives").get<std::int64_t>();
  r.false_positives = required(j, "false_positives").get<std::int64_t>();
  r.false_negatives = required(j, "false_negatives").get<std::int64_t>();
  r.flagged_count = required(j, "flagged_count").get<std::int64_t>();
  r.labeled_counterfeit_count = required(j, "labeled_counterfeit_count").get<std::int64_t>();
  r.precision = required(j, "precision").get<double>();
  r.recall = required(j, "recall").get<double>();
  r.f_measure = required(j, "f_measure").get<double>();
}

std::string canonical(const Json& j) { return j.dump(); }

std::string fingerprint(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : canonical(j)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<Json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows) {
  std::string text;
  for (const auto& row : rows) {
    text += canonical(row);
    text += '\n';
  }
  write_text_atomic(path, text);
}

void append_jsonl(const std::filesystem::path& path, const Json& row) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to " + path.string());
  out << canonical(row) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

}  // namespace triage
