#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "../support/gen.hpp"
#include "triage/core/error.hpp"
#include "triage/fixture/fixture.hpp"
#include "triage/querygen/adapters.hpp"
#include "triage/querygen/querygen.hpp"

using namespace triage;
using namespace triage::querygen;

namespace {

ProductSpec spec(std::string id, std::string maker, std::string name, std::string type,
                 std::vector<std::string> codes = {}) {
  return ProductSpec{std::move(id), std::move(maker), std::move(name), std::move(type), std::move(codes)};
}

OfferCandidate candidate(const std::string& id) {
  return OfferCandidate{Json{{"platform", "ebay"},
                             {"offer_id", id},
                             {"title", "T " + id},
                             {"price", {{"amount", "10.00"}, {"currency", "EUR"}}},
                             {"seller", {{"id", "s"}}}}};
}

std::string id_of(const OfferCandidate& c) { return c.record.at("offer_id").get<std::string>(); }

}  // namespace

TEST_CASE("code and broad queries for a coded spec") {
  auto plan = generate_queries({spec("p1", "Gucci", "", "", {"3509/S"})},
                               {Capability::kKeyword, Capability::kCode});
  REQUIRE(plan.queries.size() == 2);
  CHECK(plan.queries[0].strategy == Strategy::kCode);
  CHECK(plan.queries[0].code_filter == "3509/S");
  CHECK(plan.queries[1].strategy == Strategy::kBroad);
  CHECK(plan.queries[1].keywords == std::vector<std::string>{"gucci"});
  CHECK_FALSE(plan.queries[1].category_filter.has_value());
  CHECK(plan.queries[1].spec_refs == std::vector<std::string>{"p1"});
}

TEST_CASE("broad query carries the category filter when supported") {
  auto plan = generate_queries({spec("p1", "Gucci", "", "sunglasses")},
                               {Capability::kKeyword, Capability::kCategory});
  REQUIRE(plan.queries.size() == 1);
  CHECK(plan.queries[0].strategy == Strategy::kBroad);
  CHECK(plan.queries[0].keywords == std::vector<std::string>{"gucci"});
  CHECK(plan.queries[0].category_filter == "sunglasses");
}

TEST_CASE("specs sharing manufacturer and category share one broad query") {
  auto plan = generate_queries({spec("p1", "A", "", "shoes"), spec("p2", "A", "", "shoes")},
                               {Capability::kKeyword, Capability::kCategory});
  REQUIRE(plan.queries.size() == 1);
  CHECK(plan.queries[0].spec_refs == std::vector<std::string>{"p1", "p2"});
}

TEST_CASE("query generation errors") {
  CHECK_THROWS_AS(generate_queries({}, {Capability::kKeyword}), Error);
  try {
    generate_queries({}, {Capability::kKeyword});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptySpecs);
  }
  try {
    generate_queries({spec("p1", "", "", "", {"X1"})}, {Capability::kKeyword});
    FAIL("expected no_usable_fields");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoUsableFields);
  }
}

TEST_CASE("keyword tokens are lowercased whitespace splits") {
  CHECK(keyword_tokens("  Sun  DREAM md-120b ") == std::vector<std::string>{"sun", "dream", "md-120b"});
  CHECK(keyword_tokens("").empty());
}

TEST_CASE("property: generated queries respect capabilities and cover specs") {
  testgen::Gen g(314);
  const std::vector<std::set<Capability>> cap_sets{
      {Capability::kKeyword},
      {Capability::kCode},
      {Capability::kKeyword, Capability::kCategory},
      {Capability::kKeyword, Capability::kCode},
      {Capability::kKeyword, Capability::kCategory, Capability::kCode},
  };
  for (int round = 0; round < 200; ++round) {
    std::vector<ProductSpec> specs;
    auto n = g.range(1, 6);
    for (std::int64_t i = 0; i < n; ++i) {
      std::vector<std::string> codes;
      for (auto c = g.range(0, 2); c > 0; --c) codes.push_back("X" + std::to_string(g.range(1, 9)));
      specs.push_back(spec("p" + std::to_string(i), g.coin(0.8) ? g.pick<std::string>({"Acme", "Zeta Co"}) : "",
                           g.coin() ? g.text(1, 2) : "", g.coin() ? g.pick<std::string>({"shoes", "perfume"}) : "",
                           codes));
    }
    const auto& caps = g.pick(cap_sets);
    QueryPlan plan;
    try {
      plan = generate_queries(specs, caps);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoUsableFields);
      continue;
    }
    CHECK(plan == generate_queries(specs, caps));  // deterministic

    std::set<std::string> covered;
    for (const auto& q : plan.queries) {
      CHECK((!q.keywords.empty() || q.code_filter.has_value()));
      CHECK_FALSE(q.spec_refs.empty());
      if (!caps.count(Capability::kCategory)) CHECK_FALSE(q.category_filter.has_value());
      if (!caps.count(Capability::kCode)) CHECK_FALSE(q.code_filter.has_value());
      if (!caps.count(Capability::kKeyword)) CHECK(q.keywords.empty());
      covered.insert(q.spec_refs.begin(), q.spec_refs.end());
    }
    std::set<std::string> unusable(plan.unusable_specs.begin(), plan.unusable_specs.end());
    for (const auto& s : specs) CHECK((covered.count(s.spec_id) + unusable.count(s.spec_id)) == 1);
  }
}

TEST_CASE("execute_queries dedups identical results") {
  MockAdapter mock({candidate("1"), candidate("2"), candidate("3")});
  auto plan = generate_queries({spec("p1", "Gucci", "Sun Dream", "perfume")},
                               {Capability::kKeyword, Capability::kCategory});
  REQUIRE(plan.queries.size() == 2);
  auto res = execute_queries(plan.queries, mock);
  CHECK(mock.calls() == 2);
  CHECK(res.candidates.size() == 3);
  CHECK(res.errors.empty());
  CHECK(res.candidates[0].record.at("attributes").at("query_strategy") == "specific");
}

TEST_CASE("adapter failure is isolated to its query") {
  std::vector<SearchQuery> queries(3);
  for (std::size_t i = 0; i < 3; ++i) {
    queries[i].keywords = {"q" + std::to_string(i)};
    queries[i].spec_refs = {"p"};
  }
  struct PerQuery final : PlatformAdapter {
    std::size_t n = 0;
    std::string name() const override { return "per-query"; }
    std::vector<OfferCandidate> submit(const SearchQuery&) override {
      std::size_t i = n++;
      if (i == 1) throw std::runtime_error("boom");
      return {candidate("r" + std::to_string(i))};
    }
  } adapter;
  auto res = execute_queries(queries, adapter);
  REQUIRE(res.candidates.size() == 2);
  CHECK(id_of(res.candidates[0]) == "r0");
  CHECK(id_of(res.candidates[1]) == "r2");
  REQUIRE(res.errors.size() == 1);
  CHECK(res.errors[0].query_index == 1);

  MockAdapter failing({candidate("1")}, {0});
  auto r2 = execute_queries(queries, failing);
  CHECK(r2.errors.size() == 1);
  CHECK(r2.candidates.size() == 1);
}

TEST_CASE("replay adapter over a 1341-offer feed returns 1341 candidates") {
  fixture::FixtureOptions opts;
  opts.seed = 7;
  opts.offers = 1341;
  auto fx = fixture::generate_fixture(opts);
  auto dir = std::filesystem::temp_directory_path() / "triage_qg_replay";
  std::filesystem::create_directories(dir);
  auto paths = fixture::write_fixture(fx, dir);
  ReplayAdapter replay(dir / "feed.jsonl");
  CHECK(replay.size() == 1341);
  auto plan = generate_queries(fx.products, {Capability::kKeyword, Capability::kCategory, Capability::kCode});
  auto res = execute_queries(plan.queries, replay);
  CHECK(res.candidates.size() == 1341);
  CHECK(res.errors.empty());
  CHECK(std::is_sorted(res.candidates.begin(), res.candidates.end(),
                       [](const OfferCandidate& a, const OfferCandidate& b) { return id_of(a) < id_of(b); }));
  std::filesystem::remove_all(dir);
}

TEST_CASE("replay lines tagged with a strategy answer only that strategy") {
  auto path = std::filesystem::temp_directory_path() / "triage_qg_tagged.jsonl";
  {
    std::ofstream out(path);
    out << Json{{"strategy", "code"}, {"offer", candidate("c").record}}.dump() << "\n";
    out << candidate("any").record.dump() << "\n";
  }
  ReplayAdapter replay(path);
  SearchQuery broad;
  broad.keywords = {"x"};
  broad.spec_refs = {"p"};
  broad.strategy = Strategy::kBroad;
  auto got = replay.submit(broad);
  REQUIRE(got.size() == 1);
  CHECK(id_of(got[0]) == "any");
  broad.strategy = Strategy::kCode;
  CHECK(replay.submit(broad).size() == 2);
  std::filesystem::remove(path);
}
