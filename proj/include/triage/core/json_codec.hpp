#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "triage/core/types.hpp"

// Canonical JSON forms of the domain types. Objects are emitted with sorted
// keys and compact separators, so encode(decode(x)) == x byte-for-byte for any
// canonical x.
namespace triage {

using Json = nlohmann::json;

void to_json(Json& j, const OfferKey& key);
void from_json(const Json& j, OfferKey& key);

void to_json(Json& j, const ProductSpec& spec);
void from_json(const Json& j, ProductSpec& spec);

// Strict: throws Error(kParseError) if the record fails validate_offer.
void to_json(Json& j, const Offer& offer);
void from_json(const Json& j, Offer& offer);

void to_json(Json& j, const Cluster& cluster);
void from_json(const Json& j, Cluster& cluster);

void to_json(Json& j, const ScoreBreakdown& score);
void from_json(const Json& j, ScoreBreakdown& score);

void to_json(Json& j, const Verdict& verdict);
void from_json(const Json& j, Verdict& verdict);

void to_json(Json& j, const EvalReport& report);
void from_json(const Json& j, EvalReport& report);

// One compact line, no trailing newline.
std::string canonical(const Json& j);
// "fnv1a64:<16 hex digits>" over the canonical text.
std::string fingerprint(const Json& j);

template <typename T>
std::string encode(const T& value) {
  return canonical(Json(value));
}

template <typename T>
T decode(const std::string& text) {
  return Json::parse(text).get<T>();
}

// JSONL helpers. Blank lines are skipped on read. Writes go to a temporary
// file that is renamed over the target.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);
void append_jsonl(const std::filesystem::path& path, const Json& row);
Json read_json_file(const std::filesystem::path& path);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

template <typename T>
std::vector<T> read_jsonl_as(const std::filesystem::path& path) {
  std::vector<T> out;
  for (const auto& row : read_jsonl(path)) out.push_back(row.get<T>());
  return out;
}

template <typename Range>
void write_jsonl_of(const std::filesystem::path& path, const Range& items) {
  std::vector<Json> rows;
  for (const auto& item : items) rows.emplace_back(item);
  write_jsonl(path, rows);
}

}  // namespace triage
