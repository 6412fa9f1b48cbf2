#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "triage/querygen/querygen.hpp"

namespace triage::querygen {

// Narrow boundary to a sales platform's search interface. Implementations
// throw on transport or parse failure; execute_queries isolates the failure
// to the query that caused it.
class PlatformAdapter {
 public:
  virtual ~PlatformAdapter() = default;
  virtual std::string name() const = 0;
  virtual std::vector<OfferCandidate> submit(const SearchQuery& query) = 0;
};

// Returns a fixed result list for every query. Calls whose 0-based index is
// listed in fail_on throw instead.
class MockAdapter final : public PlatformAdapter {
 public:
  explicit MockAdapter(std::vector<OfferCandidate> results, std::set<std::size_t> fail_on = {})
      : results_(std::move(results)), fail_on_(std::move(fail_on)) {}

  std::string name() const override { return "mock"; }
  std::vector<OfferCandidate> submit(const SearchQuery& query) override;

  std::size_t calls() const { return calls_; }

 private:
  std::vector<OfferCandidate> results_;
  std::set<std::size_t> fail_on_;
  std::size_t calls_ = 0;
};

// Replays a JSONL feed. A line is either a bare candidate record (returned
// for every query) or {"strategy": "...", "offer": {...}} (returned only for
// queries of that strategy).
class ReplayAdapter final : public PlatformAdapter {
 public:
  explicit ReplayAdapter(const std::filesystem::path& path);

  std::string name() const override { return "replay:" + path_.string(); }
  std::vector<OfferCandidate> submit(const SearchQuery& query) override;

  std::size_t size() const { return lines_.size(); }

 private:
  struct Line {
    std::optional<Strategy> strategy;
    OfferCandidate candidate;
  };
  std::filesystem::path path_;
  std::vector<Line> lines_;
};

struct AdapterFailure {
  std::size_t query_index;
  std::string message;
};

struct ExecutionResult {
  std::vector<OfferCandidate> candidates;
  std::vector<AdapterFailure> errors;
};

// Runs every query, tags each candidate with the originating strategy and
// spec_refs (attributes query_strategy / spec_refs), drops repeated keys
// (first wins, spec_refs are unioned) and sorts by key. Keyless candidates
// are kept, after the keyed ones, in arrival order.
ExecutionResult execute_queries(const std::vector<SearchQuery>& queries,
                                PlatformAdapter& adapter);

}  // namespace triage::querygen
