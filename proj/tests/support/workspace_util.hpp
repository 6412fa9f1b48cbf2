#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <memory>
#include <string>

#include <unistd.h>

#include "triage/core/types.hpp"
#include "triage/core/validate.hpp"
#include "triage/fixture/fixture.hpp"

namespace triage::testgen {

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("triage_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

// Deterministic clock that ticks one second per call.
inline Clock ticking_clock(int start_second = 0) {
  auto n = std::make_shared<int>(start_second);
  return [n] {
    int s = (*n)++;
    char buf[32];
    std::snprintf(buf, sizeof buf, "2026-05-01T%02d:%02d:%02dZ", s / 3600 % 24, s / 60 % 60, s % 60);
    return Timestamp(buf);
  };
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<OfferCandidate> candidates_of(const fixture::Fixture& f) {
  std::vector<OfferCandidate> out;
  for (const auto& r : f.feed) out.push_back(OfferCandidate{r});
  return out;
}

}  // namespace triage::testgen
