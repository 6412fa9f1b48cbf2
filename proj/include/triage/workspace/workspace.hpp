#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "triage/clustering/clustering.hpp"
#include "triage/core/json_codec.hpp"
#include "triage/core/types.hpp"
#include "triage/evaluation/evaluation.hpp"
#include "triage/ingest/ingest.hpp"
#include "triage/matching/matching.hpp"
#include "triage/scoring/scoring.hpp"

namespace triage::workspace {

// The unified configuration document: sections matcher, clustering, scoring,
// evaluation and (optionally) ingest_rules.
struct WorkspaceConfig {
  matching::MatcherConfig matcher;
  clustering::ClusteringConfig clustering;
  scoring::ScoringConfig scoring;
  std::vector<double> thresholds = evaluation::kDefaultThresholds;
  ingest::TransformRuleSet ingest_rules;

  // Throws kConfigInvalid.
  void validate() const;
  static WorkspaceConfig from_json(const Json& j);
  Json to_json() const;
  std::string fingerprint() const;
};

struct ClusterCorrection {
  std::string correction_id;
  std::vector<std::string> merged_cluster_ids;
  std::string result_cluster_id;
  std::string reviewer;
  Timestamp applied_at;

  friend bool operator==(const ClusterCorrection&, const ClusterCorrection&) = default;
};

void to_json(Json& j, const ClusterCorrection& c);
void from_json(const Json& j, ClusterCorrection& c);

enum class Stage { kIngest, kCluster, kScore };

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view text);

struct RunLogEntry {
  std::int64_t run_id = 0;
  std::string stage;
  Timestamp at;
  std::string config_fingerprint;
  std::map<std::string, std::int64_t> counts;

  friend bool operator==(const RunLogEntry&, const RunLogEntry&) = default;
};

void to_json(Json& j, const RunLogEntry& e);
void from_json(const Json& j, RunLogEntry& e);

struct RunSummary {
  std::vector<std::string> stages;
  std::map<std::string, std::map<std::string, std::int64_t>> counts;  // stage -> counts
};

void to_json(Json& j, const RunSummary& s);

// Everything a workspace knows. Rebuilt from the journal on open.
struct State {
  WorkspaceConfig config;
  bool ingested = false;
  bool clustered = false;
  // When the current offer set last changed; used as scored_at so that
  // re-running on unchanged data is reproducible.
  Timestamp as_of;
  std::map<OfferKey, Offer> offers;
  std::vector<ingest::QuarantineEntry> quarantine;
  std::vector<Cluster> clusters;  // live
  std::vector<Cluster> retired;
  std::map<OfferKey, ScoreBreakdown> scores;
  std::set<OfferKey> unscored;
  std::vector<Verdict> verdicts;  // full history, oldest first
  std::vector<ClusterCorrection> corrections;
  std::vector<RunLogEntry> run_log;
  std::int64_t next_merge = 0;
  std::int64_t next_run = 1;

  Json to_json() const;
  static State from_json(const Json& j);
};

bool operator==(const State& a, const State& b);

struct MergeResult {
  ClusterCorrection correction;
  Cluster cluster;
  std::vector<ScoreBreakdown> scores;
};

void to_json(Json& j, const MergeResult& m);

struct SuspiciousItem {
  Offer offer;
  ScoreBreakdown score;
  std::optional<Verdict> verdict;
};

struct SuspiciousPage {
  std::int64_t total = 0;
  std::vector<SuspiciousItem> items;
};

void to_json(Json& j, const SuspiciousPage& p);

struct ClusterDetail {
  Cluster cluster;
  bool retired = false;
  std::vector<Offer> offers;
  std::vector<ScoreBreakdown> scores;
};

void to_json(Json& j, const ClusterDetail& d);

enum class Mode { kReadWrite, kReadOnly };

// Directory-backed store. journal.jsonl is the append-only source of truth;
// the other files are views rewritten after every commit. One writer per
// workspace (enforced across processes by an flock on .lock); readers take
// a shared lock and always see a state between two commits.
class Workspace {
 public:
  // Creates the directory and an initial config. Throws kInvalidArgument if
  // a journal already exists.
  static std::unique_ptr<Workspace> init(const std::filesystem::path& root,
                                         const WorkspaceConfig& config = {},
                                         Clock clock = system_clock());
  // Throws kWorkspaceMissing, kWorkspaceLocked.
  static std::unique_ptr<Workspace> open(const std::filesystem::path& root,
                                         Mode mode = Mode::kReadWrite,
                                         Clock clock = system_clock());
  ~Workspace();

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path candidates_path() const { return root_ / "candidates.jsonl"; }

  State state() const;
  WorkspaceConfig config() const;
  void set_config(const WorkspaceConfig& config);

  // Stages raw candidates for the next ingest run.
  void stage_candidates(const std::vector<OfferCandidate>& candidates);

  // Runs the requested stages in ingest, cluster, score order. Ingest reads
  // `input` when given, the staged candidates otherwise.
  // Throws kMissingPrerequisite, kConfigInvalid.
  RunSummary run_pipeline(const std::set<Stage>& stages,
                          const std::vector<OfferCandidate>* input = nullptr);

  // Throws kUnknownOffer. decided_at defaults to the clock.
  Verdict submit_verdict(Verdict v);
  // Bulk import; verdicts for unknown offers are skipped and counted.
  std::int64_t import_verdicts(std::vector<Verdict> verdicts, std::int64_t* skipped = nullptr);

  // Throws kFewerThanTwo, kUnknownCluster, kRetiredCluster.
  MergeResult merge_clusters(const std::vector<std::string>& cluster_ids,
                             const std::string& reviewer);

  // Offers with S < threshold, ascending by S then key. Throws kNoScores.
  SuspiciousPage list_suspicious(double threshold, std::size_t limit, std::size_t offset) const;

  std::vector<Cluster> clusters() const;
  // Throws kUnknownCluster.
  ClusterDetail cluster_detail(const std::string& cluster_id) const;

  // Throws kNoScores, kNoLabeledOffers.
  evaluation::ThresholdSweep sweep(const std::vector<double>& thresholds) const;
  std::vector<evaluation::SellerRow> seller_report(const std::vector<double>& thresholds) const;
  // Writes reports/sweep.{json,csv} and reports/sellers.{json,csv} when
  // computable; returns the paths written.
  std::vector<std::filesystem::path> write_reports() const;

  // Rewrites the journal as a single snapshot event.
  void compact();

 private:
  Workspace(std::filesystem::path root, Mode mode, Clock clock);

  void commit(const Json& event);
  void require_writable() const;
  void log_run(Stage stage, std::map<std::string, std::int64_t> counts);

  std::filesystem::path root_;
  Mode mode_;
  Clock clock_;
  int lock_fd_ = -1;
  mutable std::shared_mutex mu_;
  State state_;
};

// Applies one journal event. Live commits and replay share this path.
void apply_event(State& state, const Json& event);

// Reads a journal; a torn final line is ignored, damage elsewhere throws
// kParseError.
State replay(const std::filesystem::path& journal);

// Writes the materialized view files for `state` under root.
void write_views(const std::filesystem::path& root, const State& state);

}  // namespace triage::workspace
