#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "triage/core/json_codec.hpp"
#include "triage/core/types.hpp"
#include "triage/core/validate.hpp"

namespace triage::querygen {

enum class Strategy { kCode, kSpecific, kBroad };
enum class Capability { kKeyword, kCategory, kCode };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);
std::optional<Capability> parse_capability(std::string_view text);

struct SearchQuery {
  std::vector<std::string> keywords;
  std::optional<std::string> category_filter;
  std::optional<std::string> code_filter;
  std::vector<std::string> spec_refs;
  Strategy strategy = Strategy::kBroad;

  friend bool operator==(const SearchQuery&, const SearchQuery&) = default;
};

void to_json(Json& j, const SearchQuery& q);
void from_json(const Json& j, SearchQuery& q);

struct QueryPlan {
  std::vector<SearchQuery> queries;
  // Specs for which no query could be formed under the capabilities.
  std::vector<std::string> unusable_specs;

  friend bool operator==(const QueryPlan&, const QueryPlan&) = default;
};

// Whitespace split, lowercased, no stemming.
std::vector<std::string> keyword_tokens(std::string_view text);

// Per spec (ordered by spec_id): one code query per product code, one
// specific query (manufacturer + name), one broad query (manufacturer +
// category). Identical queries are emitted once with the union of spec_refs.
// Throws kEmptySpecs, kInvalidArgument (no capabilities) or kNoUsableFields
// when no spec yields a query.
QueryPlan generate_queries(const std::vector<ProductSpec>& specs,
                           const std::set<Capability>& capabilities);

std::vector<ProductSpec> load_product_specs(const std::filesystem::path& path);

}  // namespace triage::querygen
