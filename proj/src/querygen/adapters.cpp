#include "triage/querygen/adapters.hpp"

#include <algorithm>
#include <map>

#include "triage/core/error.hpp"

namespace triage::querygen {
namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ',';
    out += p;
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

Json& attributes_of(OfferCandidate& c) {
  if (!c.record.is_object()) c.record = Json::object();
  Json& attrs = c.record["attributes"];
  if (!attrs.is_object()) attrs = Json::object();
  return attrs;
}

}  // namespace

std::vector<OfferCandidate> MockAdapter::submit(const SearchQuery&) {
  std::size_t index = calls_++;
  if (fail_on_.count(index)) {
    throw Error(ErrorCode::kAdapterError, "mock failure on call " + std::to_string(index));
  }
  return results_;
}

ReplayAdapter::ReplayAdapter(const std::filesystem::path& path) : path_(path) {
  for (auto& row : read_jsonl(path)) {
    Line line;
    if (row.is_object() && row.contains("offer") && row.contains("strategy")) {
      line.strategy = parse_strategy(row.at("strategy").get<std::string>());
      if (!line.strategy) {
        throw Error(ErrorCode::kParseError, path.string() + ": unknown strategy in replay feed");
      }
      line.candidate.record = row.at("offer");
    } else {
      line.candidate.record = std::move(row);
    }
    lines_.push_back(std::move(line));
  }
}

std::vector<OfferCandidate> ReplayAdapter::submit(const SearchQuery& query) {
  std::vector<OfferCandidate> out;
  for (const auto& line : lines_) {
    if (line.strategy && *line.strategy != query.strategy) continue;
    out.push_back(line.candidate);
  }
  return out;
}

ExecutionResult execute_queries(const std::vector<SearchQuery>& queries,
                                PlatformAdapter& adapter) {
  ExecutionResult result;
  std::map<OfferKey, OfferCandidate> keyed;
  std::vector<OfferCandidate> keyless;

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const SearchQuery& query = queries[qi];
    std::vector<OfferCandidate> batch;
    try {
      batch = adapter.submit(query);
    } catch (const std::exception& e) {
      result.errors.push_back(AdapterFailure{qi, e.what()});
      continue;
    }
    for (auto& candidate : batch) {
      auto key = candidate_key(candidate);
      if (key) {
        if (auto it = keyed.find(*key); it != keyed.end()) {
          Json& attrs = attributes_of(it->second);
          auto refs = split(attrs.value(std::string(kSpecRefsAttr), ""));
          for (const auto& r : query.spec_refs) {
            if (std::find(refs.begin(), refs.end(), r) == refs.end()) refs.push_back(r);
          }
          attrs[std::string(kSpecRefsAttr)] = join(refs);
          continue;
        }
      }
      Json& attrs = attributes_of(candidate);
      attrs[std::string(kQueryStrategyAttr)] = std::string(to_string(query.strategy));
      attrs[std::string(kSpecRefsAttr)] = join(query.spec_refs);
      if (key) {
        keyed.emplace(*key, std::move(candidate));
      } else {
        keyless.push_back(std::move(candidate));
      }
    }
  }

  for (auto& [key, candidate] : keyed) result.candidates.push_back(std::move(candidate));
  for (auto& candidate : keyless) result.candidates.push_back(std::move(candidate));
  return result;
}

}  // namespace triage::querygen
