#include "triage/clustering/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "triage/core/error.hpp"
#include "triage/simd/kernels.hpp"

namespace triage::clustering {
namespace {

// Linkage entries of retired clusters and the diagonal. Similarities are
// never negative, so these never win an argmax.
constexpr double kRetired = -1.0;
constexpr double kNoRow = -2.0;

}  // namespace

void ClusteringConfig::validate() const {
  if (!(min_pairwise_similarity >= 0.0 && min_pairwise_similarity <= 1.0)) {
    throw Error(ErrorCode::kConfigInvalid, "min_pairwise_similarity must be in [0,1]");
  }
}

ClusteringConfig ClusteringConfig::from_json(const Json& j) {
  ClusteringConfig cfg;
  cfg.min_pairwise_similarity = j.value("min_pairwise_similarity", cfg.min_pairwise_similarity);
  if (j.contains("tie_break") && j.at("tie_break") != "lowest_cluster_id") {
    throw Error(ErrorCode::kConfigInvalid, "tie_break must be lowest_cluster_id");
  }
  cfg.validate();
  return cfg;
}

Json ClusteringConfig::to_json() const {
  return Json{{"min_pairwise_similarity", min_pairwise_similarity},
              {"tie_break", "lowest_cluster_id"}};
}

double cluster_similarity(std::span<const std::size_t> ci, std::span<const std::size_t> cj,
                          const matching::SimilarityMatrix& sim) {
  return cluster_similarity(ci, cj, [&](std::size_t x, std::size_t y) { return sim.at(x, y); });
}

double cluster_similarity(std::span<const std::size_t> ci, std::span<const std::size_t> cj,
                          const std::function<double(std::size_t, std::size_t)>& sim) {
  double lowest = 1.0;
  for (std::size_t x : ci) {
    for (std::size_t y : cj) lowest = std::min(lowest, sim(x, y));
  }
  return lowest;
}

Partition cluster_matrix(const matching::SimilarityMatrix& sim, double min_pairwise_similarity) {
  const std::size_t n = sim.size();
  if (n == 0) return {};
  const auto& kernels = simd::active_kernels();

  // linkage(i, j) between live clusters i and j, kept current under merges.
  matching::SimilarityMatrix linkage = sim;
  for (std::size_t i = 0; i < n; ++i) linkage.at(i, i) = kRetired;

  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<bool> live(n, true);
  std::vector<std::size_t> best_col(n, 0);
  std::vector<double> best_val(n, kNoRow);

  auto refresh = [&](std::size_t r) {
    auto row = linkage.row(r);
    best_col[r] = simd::argmax(row, kernels);
    best_val[r] = row[best_col[r]];
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t merges = 0; merges + 1 < n; ++merges) {
    // The lowest row holding the global maximum has its partner to the right,
    // so (a, b) is the lexicographically smallest best pair.
    std::size_t a = simd::argmax(best_val, kernels);
    double s = best_val[a];
    if (!(s > min_pairwise_similarity)) break;
    std::size_t b = best_col[a];

    simd::min_merge(linkage.row(a), linkage.row(b), kernels);
    auto row_a = linkage.row(a);
    for (std::size_t k = 0; k < n; ++k) linkage.at(k, a) = row_a[k];
    std::fill(linkage.row(b).begin(), linkage.row(b).end(), kRetired);
    for (std::size_t k = 0; k < n; ++k) linkage.at(k, b) = kRetired;

    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    live[b] = false;
    best_val[b] = kNoRow;

    refresh(a);
    // Linkage only shrinks under complete linkage, so a cached best stays
    // valid unless it pointed at one of the merged clusters.
    for (std::size_t k = 0; k < n; ++k) {
      if (!live[k] || k == a) continue;
      if (best_col[k] == a || best_col[k] == b) refresh(k);
    }
  }

  Partition out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!live[i]) continue;
    std::sort(members[i].begin(), members[i].end());
    out.push_back(std::move(members[i]));
  }
  return out;
}

std::vector<Cluster> run_clustering(const std::vector<Offer>& offers, const ClusteringConfig& cfg,
                                    const matching::MatcherConfig& mcfg) {
  cfg.validate();
  mcfg.validate();
  std::vector<const Offer*> sorted;
  sorted.reserve(offers.size());
  for (const auto& o : offers) sorted.push_back(&o);
  std::sort(sorted.begin(), sorted.end(),
            [](const Offer* x, const Offer* y) { return x->key < y->key; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->key == sorted[i - 1]->key) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate offer key " + sorted[i]->key.to_string());
    }
  }

  std::vector<matching::MatchFeatures> features;
  features.reserve(sorted.size());
  for (const Offer* o : sorted) features.push_back(matching::features_of(*o, mcfg));
  auto sim = matching::similarity_matrix(features, mcfg);
  Partition groups = cluster_matrix(sim, cfg.min_pairwise_similarity);

  std::vector<Cluster> clusters;
  clusters.reserve(groups.size());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    Cluster cluster;
    cluster.cluster_id = "c" + std::to_string(c);
    for (std::size_t idx : groups[c]) cluster.member_ids.push_back(sorted[idx]->key);
    cluster.label = features[groups[c].front()].text;
    cluster.provenance = Provenance::kAutomatic;
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

AccuracyReport cluster_accuracy(const std::vector<Cluster>& clusters,
                                const std::map<OfferKey, std::string>& gold) {
  AccuracyReport report;
  report.total = static_cast<std::int64_t>(clusters.size());

  // label -> indices of pure clusters carrying it
  std::map<std::string, std::vector<std::size_t>> pure;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    std::optional<std::string> label;
    bool mixed = false;
    for (const auto& key : clusters[i].member_ids) {
      auto it = gold.find(key);
      if (it == gold.end()) {
        throw Error(ErrorCode::kMissingGoldLabel, "no gold label for " + key.to_string());
      }
      if (!label) {
        label = it->second;
      } else if (*label != it->second) {
        mixed = true;
      }
    }
    if (mixed || !label) {
      ++report.mixed;
    } else {
      pure[*label].push_back(i);
    }
  }

  for (auto& [label, idxs] : pure) {
    auto best = std::min_element(idxs.begin(), idxs.end(), [&](std::size_t x, std::size_t y) {
      auto sx = clusters[x].member_ids.size();
      auto sy = clusters[y].member_ids.size();
      return sx != sy ? sx > sy : x < y;
    });
    ++report.correct;
    for (std::size_t idx : idxs) {
      if (idx == *best) continue;
      ++report.superfluous;
      report.superfluous_pairs.emplace_back(clusters[idx].cluster_id, clusters[*best].cluster_id);
    }
  }
  report.accuracy =
      report.total == 0 ? 0.0 : static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

std::map<OfferKey, std::string> load_gold_labels(const std::filesystem::path& path) {
  std::map<OfferKey, std::string> gold;
  for (const auto& row : read_jsonl(path)) {
    gold[row.get<OfferKey>()] = row.at("product_label").get<std::string>();
  }
  return gold;
}

}  // namespace triage::clustering
