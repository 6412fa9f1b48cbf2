#include <doctest.h>

#include "../support/gen.hpp"
#include "triage/core/error.hpp"
#include "triage/ingest/ingest.hpp"
#include "triage/matching/matching.hpp"

using namespace triage;
using namespace triage::matching;

namespace {

Offer offer(const std::string& id, const std::string& title) {
  Offer o;
  o.key = {"ebay", id};
  o.title = title;
  o.price_amount = Decimal::from_string("10");
  o.currency = "EUR";
  o.seller_id = "s";
  return ingest::normalize_offer(o, {});
}

MatcherConfig only(MatcherKind kind) {
  MatcherConfig cfg;
  cfg.matchers = {{kind, 1.0}};
  return cfg;
}

}  // namespace

TEST_CASE("reflexive and disjoint examples") {
  MatcherConfig cfg;
  auto a = offer("1", "Gucci Sun Dream");
  CHECK(similarity(a, a, cfg) == 1.0);
  CHECK(similarity(offer("2", "aaa"), offer("3", "zzz"), cfg) == 0.0);
}

TEST_CASE("reordered and repunctuated titles are highly similar") {
  // independent count: tokens {blue,gucci,md,120,b} on both sides -> 5/5;
  // "#blue gucci md120b#" has 17 trigrams, "#gucci md 120b blue#" 18,
  // 10 shared -> Dice 20/35 = 4/7
  auto a = offer("1", "Blue Gucci, MD120b");
  auto b = offer("2", "Gucci MD-120b (blue)");
  MatcherConfig cfg;
  CHECK(similarity(a, b, only(MatcherKind::kTokenJaccard)) == doctest::Approx(1.0));
  CHECK(similarity(a, b, only(MatcherKind::kTrigramDice)) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  double s = similarity(a, b, cfg);
  CHECK(s == doctest::Approx(11.0 / 14.0).epsilon(1e-12));
  CHECK(s >= 0.7);
}

TEST_CASE("component matchers on small strings") {
  auto f = [](const char* t) { return features_of(std::string_view(t)); };
  CHECK(token_jaccard(f("a b c"), f("b c d")) == doctest::Approx(0.5));
  // "#ab#" -> {#ab, ab#}; "#ac#" -> {#ac, ac#}
  CHECK(trigram_dice(f("ab"), f("ac")) == 0.0);
  CHECK(levenshtein_norm(f("kitten"), f("sitting")) == doctest::Approx(1.0 - 3.0 / 7.0));
  CHECK(match_tokens("md120b x b") == std::vector<std::string>{"120", "b", "md", "x"});
}

TEST_CASE("matcher config validation") {
  MatcherConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.matchers = {};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.matchers = {{MatcherKind::kTokenJaccard, 0.6}, {MatcherKind::kTrigramDice, 0.6}};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.matchers = {{MatcherKind::kTokenJaccard, 1.0}, {MatcherKind::kTrigramDice, 0.0}};
  CHECK_THROWS_AS(cfg.validate(), Error);
  auto round = MatcherConfig::from_json(MatcherConfig{}.to_json());
  CHECK(round.to_json() == MatcherConfig{}.to_json());
}

TEST_CASE("missing norm_title is an error") {
  Offer raw;
  raw.key = {"ebay", "1"};
  raw.title = "x";
  CHECK_THROWS_AS(similarity(raw, raw, MatcherConfig{}), Error);
}

TEST_CASE("blocking zeroes pairs with different first tokens") {
  MatcherConfig cfg;
  cfg.blocking = true;
  CHECK(similarity(offer("1", "acme red shoe"), offer("2", "zeta red shoe"), cfg) == 0.0);
  CHECK(similarity(offer("1", "acme red shoe"), offer("2", "acme red shoes"), cfg) > 0.0);
}

TEST_CASE("small matrices") {
  MatcherConfig cfg;
  auto m1 = similarity_matrix({offer("1", "x y")}, cfg);
  CHECK(m1.size() == 1);
  CHECK(m1.at(0, 0) == 1.0);
  auto m2 = similarity_matrix({offer("1", "same"), offer("2", "same")}, cfg);
  CHECK(m2.at(0, 1) == 1.0);
  CHECK(m2.at(1, 0) == 1.0);
}

TEST_CASE("property: matrix equals pairwise similarity, symmetric, in range") {
  testgen::Gen g(555);
  const std::vector<MatcherConfig> cfgs{
      MatcherConfig{},
      MatcherConfig{{{MatcherKind::kTokenJaccard, 0.2}, {MatcherKind::kTrigramDice, 0.3},
                     {MatcherKind::kLevenshteinNorm, 0.5}}},
      MatcherConfig{{{MatcherKind::kLevenshteinNorm, 1.0}}, std::string(kNormTitleAttr), true},
  };
  std::vector<std::string> vocab{"gucci", "sun", "dream", "md120b", "blue", "edt", "100ml", "acme", "x1"};
  for (int round = 0; round < 120; ++round) {
    std::vector<Offer> offers;
    auto n = g.range(1, 12);
    for (std::int64_t i = 0; i < n; ++i) {
      std::string title;
      for (auto k = g.range(1, 5); k > 0; --k) title += (g.coin(0.7) ? g.pick(vocab) : g.word()) + " ";
      offers.push_back(offer("o" + std::to_string(i), title));
    }
    const auto& cfg = g.pick(cfgs);
    auto m = similarity_matrix(offers, cfg);
    for (std::size_t i = 0; i < offers.size(); ++i) {
      CHECK(m.at(i, i) == 1.0);
      for (std::size_t j = 0; j < offers.size(); ++j) {
        double s = similarity(offers[i], offers[j], cfg);
        CHECK(m.at(i, j) == s);
        CHECK(s == similarity(offers[j], offers[i], cfg));
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
      }
    }
  }
}

TEST_CASE("property: combined score is monotone in component scores") {
  testgen::Gen g(8);
  MatcherConfig cfg;
  for (int round = 0; round < 300; ++round) {
    auto t = [&] { return features_of(std::string_view(g.text(1, 4))); };
    auto a = t(), b = t(), c = t(), d = t();
    bool dominates = token_jaccard(a, b) >= token_jaccard(c, d) && trigram_dice(a, b) >= trigram_dice(c, d);
    if (dominates) CHECK(similarity(a, b, cfg) >= similarity(c, d, cfg));
  }
}
