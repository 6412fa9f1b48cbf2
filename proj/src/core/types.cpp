#include "triage/core/types.hpp"

#include <chrono>
#include <ctime>

namespace triage {

Timestamp utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Clock system_clock() { return [] { return utc_now(); }; }

Clock fixed_clock(Timestamp at) {
  return [at = std::move(at)] { return at; };
}

std::string_view to_string(Provenance p) {
  return p == Provenance::kAutomatic ? "automatic" : "merged";
}

std::string_view to_string(VerdictLabel label) {
  switch (label) {
    case VerdictLabel::kCounterfeit: return "counterfeit";
    case VerdictLabel::kGenuine: return "genuine";
    case VerdictLabel::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Provenance> parse_provenance(std::string_view text) {
  if (text == "automatic") return Provenance::kAutomatic;
  if (text == "merged") return Provenance::kMerged;
  return std::nullopt;
}

std::optional<VerdictLabel> parse_verdict_label(std::string_view text) {
  if (text == "counterfeit") return VerdictLabel::kCounterfeit;
  if (text == "genuine") return VerdictLabel::kGenuine;
  if (text == "unknown") return VerdictLabel::kUnknown;
  return std::nullopt;
}

}  // namespace triage
