#include <doctest.h>

#include <algorithm>

#include "../support/gen.hpp"
#include "triage/clustering/clustering.hpp"
#include "triage/core/error.hpp"
#include "triage/ingest/ingest.hpp"

using namespace triage;
using namespace triage::clustering;
using matching::SimilarityMatrix;

namespace {

// Naive reference: rescans every cluster pair each round, recomputing the
// complete linkage from scratch.
Partition oracle(const SimilarityMatrix& m, double threshold) {
  Partition cs;
  for (std::size_t i = 0; i < m.size(); ++i) cs.push_back({i});
  for (;;) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        double link = 2.0;
        for (auto x : cs[i])
          for (auto y : cs[j]) link = std::min(link, m.at(x, y));
        // clusters stay ordered by smallest element, so (i, j) order is the
        // id order and a strict > keeps the earliest pair on ties
        if (link > best) {
          best = link;
          bi = i;
          bj = j;
        }
      }
    }
    if (cs.size() < 2 || !(best > threshold)) break;
    cs[bi].insert(cs[bi].end(), cs[bj].begin(), cs[bj].end());
    std::sort(cs[bi].begin(), cs[bi].end());
    cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(bj));
    std::sort(cs.begin(), cs.end());
  }
  return cs;
}

Offer offer(const std::string& id, const std::string& title) {
  Offer o;
  o.key = {"ebay", id};
  o.title = title;
  o.price_amount = Decimal::from_string("10");
  o.currency = "EUR";
  o.seller_id = "s";
  return ingest::normalize_offer(o, {});
}

Cluster cluster(std::string id, std::vector<std::string> members) {
  Cluster c;
  c.cluster_id = std::move(id);
  for (auto& m : members) c.member_ids.push_back({"ebay", std::move(m)});
  return c;
}

}  // namespace

TEST_CASE("complete linkage over the worked 2x2 example") {
  SimilarityMatrix m(4, 1.0);
  // x1=0 x2=1 y1=2 y2=3
  m.set(0, 1, 0.99);
  m.set(2, 3, 0.99);
  m.set(0, 2, 1.0);
  m.set(0, 3, 0.97);
  m.set(1, 2, 0.98);
  m.set(1, 3, 0.93);
  std::vector<std::size_t> x{0, 1}, y{2, 3};
  CHECK(cluster_similarity(x, y, m) == 0.93);
  std::vector<std::size_t> a{1}, b{3};
  CHECK(cluster_similarity(a, b, m) == 0.93);
  m.set(0, 3, 0.0);
  CHECK(cluster_similarity(x, y, m) == 0.0);
}

TEST_CASE("three offers: linkage forces the split") {
  SimilarityMatrix m(3, 1.0);
  m.set(0, 1, 0.9);
  m.set(0, 2, 0.9);
  m.set(1, 2, 0.6);
  auto p = cluster_matrix(m, 0.7);
  CHECK(p == Partition{{0, 1}, {2}});
  CHECK(p == oracle(m, 0.7));
}

TEST_CASE("uniform matrices") {
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    CHECK(cluster_matrix(SimilarityMatrix(n, 1.0), 0.7).size() == 1);
    SimilarityMatrix zero(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) zero.at(i, i) = 1.0;
    CHECK(cluster_matrix(zero, 0.7).size() == n);
  }
  CHECK(cluster_matrix(SimilarityMatrix(0), 0.7).empty());
  // merge needs strictly more than the threshold
  SimilarityMatrix edge(2, 1.0);
  edge.set(0, 1, 0.7);
  CHECK(cluster_matrix(edge, 0.7).size() == 2);
}

TEST_CASE("run_clustering ids, labels and provenance") {
  std::vector<Offer> offers{offer("3", "acme runner red"), offer("1", "zeta polo shirt"),
                            offer("2", "acme runner red!"), offer("4", "zeta polo shirt")};
  auto cs = run_clustering(offers, {}, {});
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].cluster_id == "c0");
  CHECK(cs[0].member_ids == std::vector<OfferKey>{{"ebay", "1"}, {"ebay", "4"}});
  CHECK(cs[0].label == "zeta polo shirt");
  CHECK(cs[0].provenance == Provenance::kAutomatic);
  CHECK(cs[1].cluster_id == "c1");
  CHECK(cs[1].member_ids == std::vector<OfferKey>{{"ebay", "2"}, {"ebay", "3"}});
  CHECK(run_clustering({}, {}, {}).empty());
}

TEST_CASE("clustering config validation") {
  ClusteringConfig c;
  c.min_pairwise_similarity = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c.min_pairwise_similarity = 0.0;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("property: matches the brute-force oracle") {
  testgen::Gen g(1234);
  for (int round = 0; round < 1500; ++round) {
    auto n = static_cast<std::size_t>(g.range(0, 8));
    auto m = g.matrix(n, g.coin());
    double t = g.coin() ? 0.7 : static_cast<double>(g.range(0, 10)) / 10.0;
    CAPTURE(round);
    CHECK(cluster_matrix(m, t) == oracle(m, t));
  }
}

TEST_CASE("property: partition, linkage guarantee, maximality, monotonicity") {
  testgen::Gen g(99);
  for (int round = 0; round < 300; ++round) {
    auto n = static_cast<std::size_t>(g.range(1, 40));
    auto m = g.matrix(n, g.coin());
    double t = static_cast<double>(g.range(1, 9)) / 10.0;
    auto p = cluster_matrix(m, t);

    std::vector<int> seen(n, 0);
    for (const auto& c : p)
      for (auto i : c) ++seen[i];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));

    for (const auto& c : p)
      for (auto i : c)
        for (auto j : c) CHECK(m.at(i, j) >= t);
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = a + 1; b < p.size(); ++b) CHECK(cluster_similarity(p[a], p[b], m) <= t);

    CHECK(cluster_matrix(m, t) == p);
    CHECK(cluster_matrix(m, std::min(1.0, t + 0.1)).size() >= p.size());
  }
}

TEST_CASE("accuracy counting") {
  std::map<OfferKey, std::string> gold;
  std::vector<Cluster> cs;
  int next = 0;
  auto add = [&](const std::string& id, const std::vector<std::string>& labels) {
    std::vector<std::string> members;
    for (const auto& l : labels) {
      std::string key = "o" + std::to_string(next++);
      gold[{"ebay", key}] = l;
      members.push_back(key);
    }
    cs.push_back(cluster(id, members));
  };
  // 30 products, 4 of them split off an extra pure cluster, 3 mixed clusters
  for (int i = 0; i < 30; ++i) add("p" + std::to_string(i), {"P" + std::to_string(i), "P" + std::to_string(i)});
  for (int i = 0; i < 4; ++i) add("s" + std::to_string(i), {"P" + std::to_string(i)});
  for (int i = 0; i < 3; ++i) add("x" + std::to_string(i), {"Q", "R"});
  auto r = cluster_accuracy(cs, gold);
  CHECK(r.total == 37);
  CHECK(r.correct == 30);
  CHECK(r.superfluous == 4);
  CHECK(r.mixed == 3);
  CHECK(r.accuracy == doctest::Approx(0.81).epsilon(0.005));
  REQUIRE(r.superfluous_pairs.size() == 4);
  CHECK(r.superfluous_pairs[0] == std::pair<std::string, std::string>{"s0", "p0"});

  gold.clear();
  cs.clear();
  next = 0;
  for (int i = 0; i < 100; ++i) add("a" + std::to_string(i), {"L" + std::to_string(i)});
  for (int i = 0; i < 25; ++i) add("b" + std::to_string(i), {"M", "N"});
  CHECK(cluster_accuracy(cs, gold).accuracy == doctest::Approx(0.80));
}

TEST_CASE("accuracy: perfect split and missing labels") {
  std::map<OfferKey, std::string> gold{{{"ebay", "a"}, "A"}, {{"ebay", "b"}, "B"}};
  auto r = cluster_accuracy({cluster("c0", {"a"}), cluster("c1", {"b"})}, gold);
  CHECK(r.accuracy == 1.0);
  CHECK(r.superfluous == 0);
  try {
    cluster_accuracy({cluster("c0", {"a", "z"})}, gold);
    FAIL("expected missing_gold_label");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingGoldLabel);
  }
}

TEST_CASE("accuracy: the largest pure cluster is the correct one") {
  std::map<OfferKey, std::string> gold{{{"ebay", "a"}, "A"}, {{"ebay", "b"}, "A"}, {{"ebay", "c"}, "A"}};
  auto r = cluster_accuracy({cluster("c0", {"a"}), cluster("c1", {"b", "c"})}, gold);
  CHECK(r.correct == 1);
  CHECK(r.superfluous == 1);
  REQUIRE(r.superfluous_pairs.size() == 1);
  CHECK(r.superfluous_pairs[0].first == "c0");
  CHECK(r.superfluous_pairs[0].second == "c1");
}
