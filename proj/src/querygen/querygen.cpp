#include "triage/querygen/querygen.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "triage/core/error.hpp"

namespace triage::querygen {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kCode: return "code";
    case Strategy::kSpecific: return "specific";
    case Strategy::kBroad: return "broad";
  }
  return "broad";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  if (text == "code") return Strategy::kCode;
  if (text == "specific") return Strategy::kSpecific;
  if (text == "broad") return Strategy::kBroad;
  return std::nullopt;
}

std::optional<Capability> parse_capability(std::string_view text) {
  if (text == "keyword") return Capability::kKeyword;
  if (text == "category") return Capability::kCategory;
  if (text == "code") return Capability::kCode;
  return std::nullopt;
}

void to_json(Json& j, const SearchQuery& q) {
  j = Json{{"keywords", q.keywords},
           {"spec_refs", q.spec_refs},
           {"strategy", to_string(q.strategy)}};
  if (q.category_filter) j["category_filter"] = *q.category_filter;
  if (q.code_filter) j["code_filter"] = *q.code_filter;
}

void from_json(const Json& j, SearchQuery& q) {
  q.keywords = j.value("keywords", std::vector<std::string>{});
  q.spec_refs = j.value("spec_refs", std::vector<std::string>{});
  auto s = parse_strategy(j.value("strategy", ""));
  if (!s) throw Error(ErrorCode::kParseError, "bad query strategy");
  q.strategy = *s;
  q.category_filter.reset();
  q.code_filter.reset();
  if (j.contains("category_filter")) q.category_filter = j.at("category_filter").get<std::string>();
  if (j.contains("code_filter")) q.code_filter = j.at("code_filter").get<std::string>();
}

std::vector<std::string> keyword_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.push_back(tok);
  }
  return out;
}

QueryPlan generate_queries(const std::vector<ProductSpec>& specs,
                           const std::set<Capability>& capabilities) {
  if (specs.empty()) throw Error(ErrorCode::kEmptySpecs, "no product specs given");
  if (capabilities.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no platform capabilities given");
  }
  const bool keyword = capabilities.count(Capability::kKeyword) > 0;
  const bool category = capabilities.count(Capability::kCategory) > 0;
  const bool code = capabilities.count(Capability::kCode) > 0;

  std::vector<const ProductSpec*> ordered;
  for (const auto& s : specs) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ProductSpec* a, const ProductSpec* b) { return a->spec_id < b->spec_id; });

  QueryPlan plan;
  // Identity of a query without its spec_refs, for cross-spec sharing.
  std::map<std::string, std::size_t> seen;
  auto emit = [&](SearchQuery q) {
    SearchQuery probe = q;
    probe.spec_refs.clear();
    std::string id = canonical(Json(probe));
    if (auto it = seen.find(id); it != seen.end()) {
      auto& refs = plan.queries[it->second].spec_refs;
      for (const auto& r : q.spec_refs) {
        if (std::find(refs.begin(), refs.end(), r) == refs.end()) refs.push_back(r);
      }
      return;
    }
    seen.emplace(std::move(id), plan.queries.size());
    plan.queries.push_back(std::move(q));
  };

  for (const ProductSpec* spec : ordered) {
    bool served = false;
    auto category_filter = [&]() -> std::optional<std::string> {
      if (category && !spec->product_type.empty()) return spec->product_type;
      return std::nullopt;
    };

    if (code) {
      for (const auto& c : spec->product_codes) {
        if (c.empty()) continue;
        SearchQuery q;
        q.code_filter = c;
        q.spec_refs = {spec->spec_id};
        q.strategy = Strategy::kCode;
        emit(std::move(q));
        served = true;
      }
    }
    if (keyword && !spec->product_name.empty()) {
      SearchQuery q;
      q.keywords = keyword_tokens(spec->manufacturer);
      for (auto& t : keyword_tokens(spec->product_name)) q.keywords.push_back(std::move(t));
      q.category_filter = category_filter();
      q.spec_refs = {spec->spec_id};
      q.strategy = Strategy::kSpecific;
      emit(std::move(q));
      served = true;
    }
    if (keyword && !keyword_tokens(spec->manufacturer).empty()) {
      SearchQuery q;
      q.keywords = keyword_tokens(spec->manufacturer);
      q.category_filter = category_filter();
      q.spec_refs = {spec->spec_id};
      q.strategy = Strategy::kBroad;
      emit(std::move(q));
      served = true;
    }
    if (!served) plan.unusable_specs.push_back(spec->spec_id);
  }

  if (plan.queries.empty()) {
    throw Error(ErrorCode::kNoUsableFields,
                "no spec yields a query under the given capabilities");
  }
  return plan;
}

std::vector<ProductSpec> load_product_specs(const std::filesystem::path& path) {
  Json doc = read_json_file(path);
  if (!doc.is_array()) {
    throw Error(ErrorCode::kParseError, path.string() + ": expected a JSON array of product specs");
  }
  return doc.get<std::vector<ProductSpec>>();
}

}  // namespace triage::querygen
