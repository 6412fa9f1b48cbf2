#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "triage/core/json_codec.hpp"
#include "triage/core/types.hpp"

namespace triage::matching {

enum class MatcherKind { kTokenJaccard, kTrigramDice, kLevenshteinNorm };

std::string_view to_string(MatcherKind kind);
std::optional<MatcherKind> parse_matcher(std::string_view name);

struct MatcherConfig {
  std::vector<std::pair<MatcherKind, double>> matchers{
      {MatcherKind::kTokenJaccard, 0.5}, {MatcherKind::kTrigramDice, 0.5}};
  std::string field = std::string(kNormTitleAttr);
  // Pairs whose first token differs score 0 without being compared.
  bool blocking = false;

  // Throws kInvalidMatcherConfig.
  void validate() const;
  static MatcherConfig from_json(const Json& j);
  Json to_json() const;
};

// Pre-tokenized view of one offer's compared text.
struct MatchFeatures {
  std::string text;
  std::vector<std::string> tokens;       // sorted, unique
  std::vector<std::uint32_t> trigrams;   // sorted, unique, 3 bytes packed
  std::string block_key;
};

// Space-split tokens, further split where letters meet digits
// ("md120b" -> "md", "120", "b"), so model codes compare equal regardless of
// punctuation in the source title. Returned sorted and unique.
std::vector<std::string> match_tokens(std::string_view text);
// Character 3-grams of "#" + text + "#".
std::vector<std::uint32_t> trigrams(std::string_view text);

double token_jaccard(const MatchFeatures& a, const MatchFeatures& b);
double trigram_dice(const MatchFeatures& a, const MatchFeatures& b);
double levenshtein_norm(const MatchFeatures& a, const MatchFeatures& b);

MatchFeatures features_of(std::string_view text);
// Throws kMissingNormTitle when the configured field is absent.
MatchFeatures features_of(const Offer& offer, const MatcherConfig& cfg);

double similarity(const MatchFeatures& a, const MatchFeatures& b, const MatcherConfig& cfg);
double similarity(const Offer& a, const Offer& b, const MatcherConfig& cfg);

// Dense symmetric n x n matrix, row-major.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  // Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Only the upper triangle is computed, then mirrored; diagonal is 1.
SimilarityMatrix similarity_matrix(const std::vector<Offer>& offers, const MatcherConfig& cfg);
SimilarityMatrix similarity_matrix(const std::vector<MatchFeatures>& features,
                                   const MatcherConfig& cfg);

// Debug dump: header row and first column are offer keys.
std::string matrix_csv(const std::vector<Offer>& offers, const SimilarityMatrix& m);

}  // namespace triage::matching
