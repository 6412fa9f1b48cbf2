#include "triage/matching/matching.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "triage/core/error.hpp"
#include "triage/simd/kernels.hpp"

namespace triage::matching {
namespace {

enum class CharClass { kLetter, kDigit, kOther };

CharClass classify(unsigned char c) {
  if (std::isdigit(c)) return CharClass::kDigit;
  if (std::isalpha(c) || c >= 0x80) return CharClass::kLetter;
  return CharClass::kOther;
}

template <typename T>
std::size_t intersection_size(const std::vector<T>& a, const std::vector<T>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

double score(MatcherKind kind, const MatchFeatures& a, const MatchFeatures& b) {
  switch (kind) {
    case MatcherKind::kTokenJaccard: return token_jaccard(a, b);
    case MatcherKind::kTrigramDice: return trigram_dice(a, b);
    case MatcherKind::kLevenshteinNorm: return levenshtein_norm(a, b);
  }
  return 0.0;
}

bool blocked(const MatchFeatures& a, const MatchFeatures& b, const MatcherConfig& cfg) {
  return cfg.blocking && a.block_key != b.block_key;
}

}  // namespace

std::string_view to_string(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::kTokenJaccard: return "token_jaccard";
    case MatcherKind::kTrigramDice: return "trigram_dice";
    case MatcherKind::kLevenshteinNorm: return "levenshtein_norm";
  }
  return "token_jaccard";
}

std::optional<MatcherKind> parse_matcher(std::string_view name) {
  if (name == "token_jaccard") return MatcherKind::kTokenJaccard;
  if (name == "trigram_dice") return MatcherKind::kTrigramDice;
  if (name == "levenshtein_norm") return MatcherKind::kLevenshteinNorm;
  return std::nullopt;
}

void MatcherConfig::validate() const {
  if (matchers.empty()) {
    throw Error(ErrorCode::kInvalidMatcherConfig, "at least one matcher must be enabled");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < matchers.size(); ++i) {
    const auto& [kind, weight] = matchers[i];
    if (!(weight > 0.0)) {
      throw Error(ErrorCode::kInvalidMatcherConfig,
                  "matcher weight must be positive: " + std::string(to_string(kind)));
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (matchers[k].first == kind) {
        throw Error(ErrorCode::kInvalidMatcherConfig,
                    "matcher listed twice: " + std::string(to_string(kind)));
      }
    }
    sum += weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidMatcherConfig, "matcher weights must sum to 1");
  }
  if (field.empty()) throw Error(ErrorCode::kInvalidMatcherConfig, "empty compare field");
}

MatcherConfig MatcherConfig::from_json(const Json& j) {
  MatcherConfig cfg;
  if (j.contains("matchers")) {
    cfg.matchers.clear();
    for (const auto& m : j.at("matchers")) {
      auto kind = parse_matcher(m.at("name").get<std::string>());
      if (!kind) {
        throw Error(ErrorCode::kInvalidMatcherConfig,
                    "unknown matcher '" + m.at("name").get<std::string>() + "'");
      }
      cfg.matchers.emplace_back(*kind, m.at("weight").get<double>());
    }
  }
  cfg.field = j.value("field", cfg.field);
  cfg.blocking = j.value("blocking", false);
  cfg.validate();
  return cfg;
}

Json MatcherConfig::to_json() const {
  Json ms = Json::array();
  for (const auto& [kind, weight] : matchers) {
    ms.push_back(Json{{"name", to_string(kind)}, {"weight", weight}});
  }
  return Json{{"matchers", ms}, {"field", field}, {"blocking", blocking}};
}

std::vector<std::string> match_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  CharClass cur_class = CharClass::kOther;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    CharClass cls = classify(c);
    if (cls == CharClass::kOther) {
      flush();
      cur_class = cls;
      continue;
    }
    if (!cur.empty() && cls != cur_class) flush();
    cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    cur_class = cls;
  }
  flush();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint32_t> trigrams(std::string_view text) {
  std::string padded;
  padded.reserve(text.size() + 2);
  padded += '#';
  padded += text;
  padded += '#';
  std::vector<std::uint32_t> out;
  if (text.empty()) return out;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    auto b0 = static_cast<unsigned char>(padded[i]);
    auto b1 = static_cast<unsigned char>(padded[i + 1]);
    auto b2 = static_cast<unsigned char>(padded[i + 2]);
    out.push_back((std::uint32_t{b0} << 16) | (std::uint32_t{b1} << 8) | b2);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double token_jaccard(const MatchFeatures& a, const MatchFeatures& b) {
  if (a.tokens.empty() && b.tokens.empty()) return 1.0;
  std::size_t inter = intersection_size(a.tokens, b.tokens);
  std::size_t uni = a.tokens.size() + b.tokens.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double trigram_dice(const MatchFeatures& a, const MatchFeatures& b) {
  if (a.trigrams.empty() && b.trigrams.empty()) return 1.0;
  std::size_t inter = intersection_size(a.trigrams, b.trigrams);
  return 2.0 * static_cast<double>(inter) /
         static_cast<double>(a.trigrams.size() + b.trigrams.size());
}

double levenshtein_norm(const MatchFeatures& a, const MatchFeatures& b) {
  const std::string& s = a.text;
  const std::string& t = b.text;
  std::size_t longest = std::max(s.size(), t.size());
  if (longest == 0) return 1.0;
  std::vector<std::size_t> prev(t.size() + 1);
  std::vector<std::size_t> cur(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      std::size_t sub = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return 1.0 - static_cast<double>(prev[t.size()]) / static_cast<double>(longest);
}

MatchFeatures features_of(std::string_view text) {
  MatchFeatures f;
  f.text = std::string(text);
  f.tokens = match_tokens(text);
  f.trigrams = trigrams(text);
  auto space = text.find(' ');
  f.block_key = std::string(text.substr(0, space));
  return f;
}

MatchFeatures features_of(const Offer& offer, const MatcherConfig& cfg) {
  const std::string* text = offer.attribute(cfg.field);
  if (!text) {
    throw Error(ErrorCode::kMissingNormTitle,
                "offer " + offer.key.to_string() + " has no '" + cfg.field + "'");
  }
  return features_of(*text);
}

double similarity(const MatchFeatures& a, const MatchFeatures& b, const MatcherConfig& cfg) {
  if (a.text == b.text) return 1.0;
  if (blocked(a, b, cfg)) return 0.0;
  double acc = 0.0;
  for (const auto& [kind, weight] : cfg.matchers) {
    double product = weight * score(kind, a, b);
    acc = acc + product;
  }
  return std::min(acc, 1.0);
}

double similarity(const Offer& a, const Offer& b, const MatcherConfig& cfg) {
  return similarity(features_of(a, cfg), features_of(b, cfg), cfg);
}

SimilarityMatrix similarity_matrix(const std::vector<MatchFeatures>& features,
                                   const MatcherConfig& cfg) {
  const std::size_t n = features.size();
  SimilarityMatrix combined(n);
  SimilarityMatrix per_matcher(n);
  for (const auto& [kind, weight] : cfg.matchers) {
    for (std::size_t i = 0; i < n; ++i) {
      auto row = per_matcher.row(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        row[j] = blocked(features[i], features[j], cfg) ? 0.0 : score(kind, features[i], features[j]);
      }
    }
    simd::axpy(combined.data(), per_matcher.data(), weight);
  }
  for (std::size_t i = 0; i < n; ++i) {
    combined.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double v;
      if (features[i].text == features[j].text) {
        v = 1.0;
      } else if (blocked(features[i], features[j], cfg)) {
        v = 0.0;
      } else {
        v = std::min(combined.at(i, j), 1.0);
      }
      combined.set(i, j, v);
    }
  }
  return combined;
}

SimilarityMatrix similarity_matrix(const std::vector<Offer>& offers, const MatcherConfig& cfg) {
  std::vector<MatchFeatures> features;
  features.reserve(offers.size());
  for (const auto& o : offers) features.push_back(features_of(o, cfg));
  return similarity_matrix(features, cfg);
}

std::string matrix_csv(const std::vector<Offer>& offers, const SimilarityMatrix& m) {
  std::ostringstream out;
  out << "offer";
  for (const auto& o : offers) out << ',' << o.key.to_string();
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << offers[i].key.to_string();
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << m.at(i, j);
    out << '\n';
  }
  return out.str();
}

}  // namespace triage::matching
