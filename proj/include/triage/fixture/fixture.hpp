#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "triage/core/json_codec.hpp"
#include "triage/core/types.hpp"

// Seeded synthetic marketplace data with ground truth, standing in for a
// proprietary crawl.
namespace triage::fixture {

struct FixtureOptions {
  std::uint64_t seed = 42;
  std::int64_t offers = 500;
  double fake_rate = 0.1;
  // Products whose counterfeits also appear under a differently worded title
  // that clusters apart from the real product.
  std::int64_t superfluous = 0;
  // Genuine offers listed at a clearance price; these become false alarms.
  double discount_rate = 0.015;
  std::string platform = "ebay";
};

struct GoldLabel {
  OfferKey key;
  std::string product_label;
};

void to_json(Json& j, const GoldLabel& g);

struct Fixture {
  std::vector<Json> feed;  // raw candidate records
  std::vector<Verdict> labels;
  std::vector<GoldLabel> gold;
  std::vector<ProductSpec> products;
  // Counterfeits priced at or below half the highest genuine price of their
  // product, and how many were planted under a superfluous title.
  std::int64_t counterfeit_count = 0;
  std::int64_t superfluous_offers = 0;
};

// Throws kInvalidArgument on out-of-range options.
Fixture generate_fixture(const FixtureOptions& opts);

// feed.jsonl, labels.jsonl, gold.jsonl, products.json
std::vector<std::filesystem::path> write_fixture(const Fixture& f, const std::filesystem::path& dir);

}  // namespace triage::fixture
