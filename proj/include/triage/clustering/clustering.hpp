#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "triage/core/types.hpp"
#include "triage/matching/matching.hpp"

namespace triage::clustering {

struct ClusteringConfig {
  // Clusters merge only while their linkage is strictly above this value.
  double min_pairwise_similarity = 0.7;

  void validate() const;
  static ClusteringConfig from_json(const Json& j);
  Json to_json() const;
};

using Partition = std::vector<std::vector<std::size_t>>;

// Complete linkage: the smallest similarity between any element of ci and
// any element of cj.
double cluster_similarity(std::span<const std::size_t> ci, std::span<const std::size_t> cj,
                          const matching::SimilarityMatrix& sim);
double cluster_similarity(std::span<const std::size_t> ci, std::span<const std::size_t> cj,
                          const std::function<double(std::size_t, std::size_t)>& sim);

// Agglomerative clustering over a precomputed matrix. Each round merges the
// globally best pair of clusters (ties: lowest cluster id, then the second
// lowest; a cluster's id is its smallest element index) while that pair's
// complete linkage exceeds the threshold. Groups come back sorted, ordered
// by smallest element.
Partition cluster_matrix(const matching::SimilarityMatrix& sim, double min_pairwise_similarity);

// Sorts offers by key, builds the similarity matrix and clusters it. Ids are
// c0, c1, ... in order of each cluster's smallest member key; the label is
// that member's compared text.
std::vector<Cluster> run_clustering(const std::vector<Offer>& offers, const ClusteringConfig& cfg,
                                    const matching::MatcherConfig& mcfg);

struct AccuracyReport {
  double accuracy = 0.0;
  std::int64_t correct = 0;
  std::int64_t superfluous = 0;
  std::int64_t mixed = 0;
  std::int64_t total = 0;
  // (superfluous cluster id, id of the correct cluster of the same product)
  std::vector<std::pair<std::string, std::string>> superfluous_pairs;
};

// A cluster is pure when every member has the same gold label. Per label the
// largest pure cluster (earliest on ties) counts correct, further pure ones
// are superfluous, impure ones are mixed. accuracy = correct / total.
// Throws kMissingGoldLabel.
AccuracyReport cluster_accuracy(const std::vector<Cluster>& clusters,
                                const std::map<OfferKey, std::string>& gold);

// Gold labels file: JSONL of {platform, offer_id, product_label}.
std::map<OfferKey, std::string> load_gold_labels(const std::filesystem::path& path);

}  // namespace triage::clustering
