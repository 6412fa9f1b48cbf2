#include "triage/workspace/workspace.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <mutex>

#include "triage/core/error.hpp"

namespace triage::workspace {
namespace fs = std::filesystem;

namespace {

constexpr const char* kJournal = "journal.jsonl";

Json keys_json(const std::set<OfferKey>& keys) {
  Json arr = Json::array();
  for (const auto& k : keys) arr.push_back(k);
  return arr;
}

template <typename Map>
Json values_json(const Map& m) {
  Json arr = Json::array();
  for (const auto& [k, v] : m) arr.push_back(v);
  return arr;
}

void replace_scores(State& s, const Json& scores, const Json& unscored) {
  for (const auto& row : scores) {
    auto sb = row.get<ScoreBreakdown>();
    s.unscored.erase(sb.offer_ref);
    s.scores[sb.offer_ref] = std::move(sb);
  }
  for (const auto& row : unscored) {
    auto key = row.get<OfferKey>();
    s.scores.erase(key);
    s.unscored.insert(key);
  }
}

void append_line_synced(const fs::path& path, const std::string& line) {
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::string data = line + "\n";
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      ::close(fd);
      throw Error(ErrorCode::kIoError, "write failed on " + path.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

std::optional<VerdictLabel> current_label(const State& s, const OfferKey& key) {
  for (auto it = s.verdicts.rbegin(); it != s.verdicts.rend(); ++it) {
    if (it->offer_ref == key) return it->label;
  }
  return std::nullopt;
}

std::optional<Verdict> current_verdict(const State& s, const OfferKey& key) {
  for (auto it = s.verdicts.rbegin(); it != s.verdicts.rend(); ++it) {
    if (it->offer_ref == key) return *it;
  }
  return std::nullopt;
}

std::vector<ScoreBreakdown> score_list(const State& s) {
  std::vector<ScoreBreakdown> out;
  out.reserve(s.scores.size());
  for (const auto& [k, v] : s.scores) out.push_back(v);
  return out;
}

}  // namespace

// ---- config ----------------------------------------------------------------

void WorkspaceConfig::validate() const {
  try {
    matcher.validate();
    clustering.validate();
    scoring.validate();
    evaluation::validate_thresholds(thresholds);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }
}

WorkspaceConfig WorkspaceConfig::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfigInvalid, "config must be an object");
  WorkspaceConfig cfg;
  try {
    if (j.contains("matcher")) cfg.matcher = matching::MatcherConfig::from_json(j.at("matcher"));
    if (j.contains("clustering")) {
      cfg.clustering = clustering::ClusteringConfig::from_json(j.at("clustering"));
    }
    if (j.contains("scoring")) cfg.scoring = scoring::ScoringConfig::from_json(j.at("scoring"));
    if (j.contains("evaluation")) {
      cfg.thresholds = j.at("evaluation").value("thresholds", cfg.thresholds);
    }
    if (j.contains("ingest_rules")) {
      cfg.ingest_rules = ingest::TransformRuleSet::from_json(j.at("ingest_rules"));
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }
  cfg.validate();
  return cfg;
}

Json WorkspaceConfig::to_json() const {
  return Json{{"matcher", matcher.to_json()},
              {"clustering", clustering.to_json()},
              {"scoring", scoring.to_json()},
              {"evaluation", Json{{"thresholds", thresholds}}},
              {"ingest_rules", ingest_rules.to_json()}};
}

std::string WorkspaceConfig::fingerprint() const { return triage::fingerprint(to_json()); }

// ---- value types -----------------------------------------------------------

void to_json(Json& j, const ClusterCorrection& c) {
  j = Json{{"correction_id", c.correction_id},
           {"merged_cluster_ids", c.merged_cluster_ids},
           {"result_cluster_id", c.result_cluster_id},
           {"reviewer", c.reviewer},
           {"applied_at", c.applied_at}};
}

void from_json(const Json& j, ClusterCorrection& c) {
  c.correction_id = j.at("correction_id").get<std::string>();
  c.merged_cluster_ids = j.at("merged_cluster_ids").get<std::vector<std::string>>();
  c.result_cluster_id = j.at("result_cluster_id").get<std::string>();
  c.reviewer = j.at("reviewer").get<std::string>();
  c.applied_at = j.at("applied_at").get<std::string>();
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kIngest: return "ingest";
    case Stage::kCluster: return "cluster";
    case Stage::kScore: return "score";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view text) {
  if (text == "ingest") return Stage::kIngest;
  if (text == "cluster") return Stage::kCluster;
  if (text == "score") return Stage::kScore;
  return std::nullopt;
}

void to_json(Json& j, const RunLogEntry& e) {
  j = Json{{"run_id", e.run_id},
           {"stage", e.stage},
           {"at", e.at},
           {"config_fingerprint", e.config_fingerprint},
           {"counts", e.counts}};
}

void from_json(const Json& j, RunLogEntry& e) {
  e.run_id = j.at("run_id").get<std::int64_t>();
  e.stage = j.at("stage").get<std::string>();
  e.at = j.at("at").get<std::string>();
  e.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  e.counts = j.at("counts").get<std::map<std::string, std::int64_t>>();
}

void to_json(Json& j, const RunSummary& s) { j = Json{{"stages", s.stages}, {"counts", s.counts}}; }

void to_json(Json& j, const MergeResult& m) {
  j = Json{{"correction", m.correction}, {"cluster", m.cluster}, {"scores", m.scores}};
}

void to_json(Json& j, const SuspiciousPage& p) {
  Json items = Json::array();
  for (const auto& it : p.items) {
    Json row{{"offer", it.offer}, {"score", it.score}};
    if (it.verdict) row["verdict"] = *it.verdict;
    items.push_back(std::move(row));
  }
  j = Json{{"total", p.total}, {"items", std::move(items)}};
}

void to_json(Json& j, const ClusterDetail& d) {
  j = Json{{"cluster", d.cluster}, {"retired", d.retired}, {"offers", d.offers}, {"scores", d.scores}};
}

// ---- state -----------------------------------------------------------------

Json State::to_json() const {
  return Json{{"config", config.to_json()},
              {"ingested", ingested},
              {"clustered", clustered},
              {"as_of", as_of},
              {"offers", values_json(offers)},
              {"quarantine", quarantine},
              {"clusters", clusters},
              {"retired", retired},
              {"scores", values_json(scores)},
              {"unscored", keys_json(unscored)},
              {"verdicts", verdicts},
              {"corrections", corrections},
              {"run_log", run_log},
              {"next_merge", next_merge},
              {"next_run", next_run}};
}

State State::from_json(const Json& j) {
  State s;
  s.config = WorkspaceConfig::from_json(j.at("config"));
  s.ingested = j.at("ingested").get<bool>();
  s.clustered = j.at("clustered").get<bool>();
  s.as_of = j.at("as_of").get<std::string>();
  for (const auto& row : j.at("offers")) {
    auto o = row.get<Offer>();
    s.offers.emplace(o.key, std::move(o));
  }
  s.quarantine = j.at("quarantine").get<std::vector<ingest::QuarantineEntry>>();
  s.clusters = j.at("clusters").get<std::vector<Cluster>>();
  s.retired = j.at("retired").get<std::vector<Cluster>>();
  replace_scores(s, j.at("scores"), j.at("unscored"));
  s.verdicts = j.at("verdicts").get<std::vector<Verdict>>();
  s.corrections = j.at("corrections").get<std::vector<ClusterCorrection>>();
  s.run_log = j.at("run_log").get<std::vector<RunLogEntry>>();
  s.next_merge = j.at("next_merge").get<std::int64_t>();
  s.next_run = j.at("next_run").get<std::int64_t>();
  return s;
}

bool operator==(const State& a, const State& b) { return a.to_json() == b.to_json(); }

void apply_event(State& s, const Json& ev) {
  const std::string type = ev.at("type").get<std::string>();
  if (ev.contains("run")) {
    s.run_log.push_back(ev.at("run").get<RunLogEntry>());
    s.next_run = s.run_log.back().run_id + 1;
  }
  if (type == "config") {
    s.config = WorkspaceConfig::from_json(ev.at("config"));
  } else if (type == "ingest") {
    s.as_of = ev.at("as_of").get<std::string>();
    s.offers.clear();
    for (const auto& row : ev.at("offers")) {
      auto o = row.get<Offer>();
      s.offers.emplace(o.key, std::move(o));
    }
    s.quarantine = ev.at("quarantine").get<std::vector<ingest::QuarantineEntry>>();
    s.ingested = true;
    s.clustered = false;
    s.clusters.clear();
    s.retired.clear();
    s.corrections.clear();
    s.scores.clear();
    s.unscored.clear();
    s.next_merge = 0;
    std::erase_if(s.verdicts, [&](const Verdict& v) { return !s.offers.count(v.offer_ref); });
  } else if (type == "cluster") {
    s.clusters = ev.at("clusters").get<std::vector<Cluster>>();
    s.clustered = true;
    s.retired.clear();
    s.corrections.clear();
    s.scores.clear();
    s.unscored.clear();
    s.next_merge = 0;
  } else if (type == "score") {
    s.scores.clear();
    s.unscored.clear();
    replace_scores(s, ev.at("scores"), ev.at("unscored"));
  } else if (type == "verdicts") {
    for (const auto& row : ev.at("verdicts")) s.verdicts.push_back(row.get<Verdict>());
  } else if (type == "merge") {
    auto correction = ev.at("correction").get<ClusterCorrection>();
    const auto& sources = correction.merged_cluster_ids;
    for (auto it = s.clusters.begin(); it != s.clusters.end();) {
      if (std::find(sources.begin(), sources.end(), it->cluster_id) != sources.end()) {
        s.retired.push_back(*it);
        it = s.clusters.erase(it);
      } else {
        ++it;
      }
    }
    s.clusters.push_back(ev.at("cluster").get<Cluster>());
    s.corrections.push_back(std::move(correction));
    replace_scores(s, ev.at("scores"), ev.at("unscored"));
    ++s.next_merge;
  } else if (type == "snapshot") {
    s = State::from_json(ev.at("state"));
  } else {
    throw Error(ErrorCode::kParseError, "unknown journal event '" + type + "'");
  }
}

State replay(const fs::path& journal) {
  std::ifstream in(journal, std::ios::binary);
  if (!in) throw Error(ErrorCode::kWorkspaceMissing, "no journal at " + journal.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  // A line without its newline is a write interrupted mid-way.
  in.clear();
  in.seekg(0, std::ios::end);
  bool torn_tail = false;
  if (in.tellg() > 0) {
    in.seekg(-1, std::ios::end);
    torn_tail = in.get() != '\n';
  }

  State s;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Json ev;
    try {
      ev = Json::parse(lines[i]);
    } catch (const Json::parse_error&) {
      if (torn_tail && i + 1 == lines.size()) break;
      throw Error(ErrorCode::kParseError,
                  journal.string() + ":" + std::to_string(i + 1) + ": damaged journal entry");
    }
    apply_event(s, ev);
  }
  return s;
}

void write_views(const fs::path& root, const State& s) {
  write_text_atomic(root / "config.json", s.config.to_json().dump(2) + "\n");
  write_jsonl(root / "offers.jsonl", [&] {
    std::vector<Json> rows;
    for (const auto& [k, o] : s.offers) rows.emplace_back(o);
    return rows;
  }());
  write_jsonl_of(root / "quarantine.jsonl", s.quarantine);
  write_jsonl_of(root / "clusters.jsonl", s.clusters);
  write_jsonl_of(root / "clusters_retired.jsonl", s.retired);
  write_jsonl(root / "scores.jsonl", [&] {
    std::vector<Json> rows;
    for (const auto& [k, sb] : s.scores) rows.emplace_back(sb);
    return rows;
  }());
  write_jsonl_of(root / "verdicts.jsonl", s.verdicts);
  write_jsonl_of(root / "corrections.jsonl", s.corrections);
  write_jsonl_of(root / "run_log.jsonl", s.run_log);
}

// ---- workspace -------------------------------------------------------------

Workspace::Workspace(fs::path root, Mode mode, Clock clock)
    : root_(std::move(root)), mode_(mode), clock_(std::move(clock)) {}

Workspace::~Workspace() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

std::unique_ptr<Workspace> Workspace::init(const fs::path& root, const WorkspaceConfig& config,
                                           Clock clock) {
  config.validate();
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + root.string() + ": " + ec.message());
  if (fs::exists(root / kJournal)) {
    throw Error(ErrorCode::kInvalidArgument, "workspace already initialized at " + root.string());
  }
  fs::create_directories(root / "reports");
  append_line_synced(root / kJournal, canonical(Json{{"type", "config"}, {"config", config.to_json()}}));
  return open(root, Mode::kReadWrite, std::move(clock));
}

std::unique_ptr<Workspace> Workspace::open(const fs::path& root, Mode mode, Clock clock) {
  if (!fs::exists(root / kJournal)) {
    throw Error(ErrorCode::kWorkspaceMissing, "no workspace at " + root.string());
  }
  std::unique_ptr<Workspace> ws(new Workspace(root, mode, std::move(clock)));
  if (mode == Mode::kReadWrite) {
    ws->lock_fd_ = ::open((root / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (ws->lock_fd_ < 0) throw Error(ErrorCode::kIoError, "cannot open lock file");
    if (::flock(ws->lock_fd_, LOCK_EX | LOCK_NB) != 0) {
      throw Error(ErrorCode::kWorkspaceLocked, "another writer holds " + root.string());
    }
  }
  ws->state_ = replay(root / kJournal);
  if (mode == Mode::kReadWrite) write_views(root, ws->state_);
  return ws;
}

void Workspace::require_writable() const {
  if (mode_ != Mode::kReadWrite) {
    throw Error(ErrorCode::kWorkspaceLocked, "workspace opened read-only");
  }
}

// Caller holds the exclusive lock.
void Workspace::commit(const Json& event) {
  State next = state_;
  apply_event(next, event);
  append_line_synced(root_ / kJournal, canonical(event));
  state_ = std::move(next);
  write_views(root_, state_);
}

State Workspace::state() const {
  std::shared_lock lock(mu_);
  return state_;
}

WorkspaceConfig Workspace::config() const {
  std::shared_lock lock(mu_);
  return state_.config;
}

void Workspace::set_config(const WorkspaceConfig& config) {
  require_writable();
  config.validate();
  std::unique_lock lock(mu_);
  commit(Json{{"type", "config"}, {"config", config.to_json()}});
}

void Workspace::stage_candidates(const std::vector<OfferCandidate>& candidates) {
  require_writable();
  std::vector<Json> rows;
  rows.reserve(candidates.size());
  for (const auto& c : candidates) rows.push_back(c.record);
  std::unique_lock lock(mu_);
  write_jsonl(candidates_path(), rows);
}

RunSummary Workspace::run_pipeline(const std::set<Stage>& stages,
                                   const std::vector<OfferCandidate>* input) {
  require_writable();
  std::unique_lock lock(mu_);
  state_.config.validate();
  const std::string fp = state_.config.fingerprint();
  RunSummary summary;

  auto run_entry = [&](Stage stage, std::map<std::string, std::int64_t> counts) {
    RunLogEntry e;
    e.run_id = state_.next_run;
    e.stage = std::string(to_string(stage));
    e.at = clock_();
    e.config_fingerprint = fp;
    e.counts = counts;
    summary.stages.push_back(e.stage);
    summary.counts[e.stage] = std::move(counts);
    return e;
  };

  if (stages.count(Stage::kIngest)) {
    std::vector<OfferCandidate> staged;
    if (input == nullptr) {
      if (!fs::exists(candidates_path())) {
        throw Error(ErrorCode::kMissingPrerequisite, "ingest needs staged candidates or an input file");
      }
      for (auto& row : read_jsonl(candidates_path())) staged.push_back(OfferCandidate{std::move(row)});
      input = &staged;
    }
    auto cleaned = ingest::clean(*input, state_.config.ingest_rules);
    std::sort(cleaned.offers.begin(), cleaned.offers.end(),
              [](const Offer& a, const Offer& b) { return a.key < b.key; });
    Json offers = cleaned.offers;
    Json quarantine = cleaned.quarantine;
    // Unchanged data keeps its as-of time.
    Timestamp as_of = state_.as_of;
    bool same = state_.ingested && offers == values_json(state_.offers) &&
                quarantine == Json(state_.quarantine);
    if (!same) as_of = clock_();
    commit(Json{{"type", "ingest"},
                {"as_of", as_of},
                {"offers", std::move(offers)},
                {"quarantine", std::move(quarantine)},
                {"run", run_entry(Stage::kIngest,
                                  {{"candidates", static_cast<std::int64_t>(input->size())},
                                   {"offers", static_cast<std::int64_t>(cleaned.offers.size())},
                                   {"quarantined",
                                    static_cast<std::int64_t>(cleaned.quarantine.size())}})}});
  }

  if (stages.count(Stage::kCluster)) {
    if (!state_.ingested) {
      throw Error(ErrorCode::kMissingPrerequisite, "cluster needs ingested offers");
    }
    std::vector<Offer> offers;
    offers.reserve(state_.offers.size());
    for (const auto& [k, o] : state_.offers) offers.push_back(o);
    auto clusters = clustering::run_clustering(offers, state_.config.clustering, state_.config.matcher);
    std::int64_t singletons = std::count_if(clusters.begin(), clusters.end(),
                                            [](const Cluster& c) { return c.member_ids.size() == 1; });
    auto entry = run_entry(Stage::kCluster, {{"offers", static_cast<std::int64_t>(offers.size())},
                                             {"clusters", static_cast<std::int64_t>(clusters.size())},
                                             {"singletons", singletons}});
    commit(Json{{"type", "cluster"}, {"clusters", clusters}, {"run", entry}});
  }

  if (stages.count(Stage::kScore)) {
    if (!state_.clustered) throw Error(ErrorCode::kMissingPrerequisite, "score needs clusters");
    Json scores = Json::array();
    std::vector<OfferKey> unscored;
    for (const auto& c : state_.clusters) {
      for (auto& sb :
           scoring::score_cluster(c, state_.offers, state_.config.scoring, state_.as_of, &unscored)) {
        scores.push_back(std::move(sb));
      }
    }
    std::set<OfferKey> unscored_set(unscored.begin(), unscored.end());
    auto entry = run_entry(Stage::kScore, {{"clusters", static_cast<std::int64_t>(state_.clusters.size())},
                                           {"scores", static_cast<std::int64_t>(scores.size())},
                                           {"unscored", static_cast<std::int64_t>(unscored.size())}});
    commit(Json{{"type", "score"},
                {"scores", std::move(scores)},
                {"unscored", keys_json(unscored_set)},
                {"run", entry}});
  }
  return summary;
}

Verdict Workspace::submit_verdict(Verdict v) {
  require_writable();
  std::unique_lock lock(mu_);
  if (!state_.offers.count(v.offer_ref)) {
    throw Error(ErrorCode::kUnknownOffer, "unknown offer " + v.offer_ref.to_string());
  }
  if (v.decided_at.empty()) v.decided_at = clock_();
  commit(Json{{"type", "verdicts"}, {"verdicts", Json::array({v})}});
  return v;
}

std::int64_t Workspace::import_verdicts(std::vector<Verdict> verdicts, std::int64_t* skipped) {
  require_writable();
  std::unique_lock lock(mu_);
  Json rows = Json::array();
  std::int64_t dropped = 0;
  for (auto& v : verdicts) {
    if (!state_.offers.count(v.offer_ref)) {
      ++dropped;
      continue;
    }
    if (v.decided_at.empty()) v.decided_at = clock_();
    rows.push_back(v);
  }
  if (skipped != nullptr) *skipped = dropped;
  auto accepted = static_cast<std::int64_t>(rows.size());
  if (accepted > 0) commit(Json{{"type", "verdicts"}, {"verdicts", std::move(rows)}});
  return accepted;
}

MergeResult Workspace::merge_clusters(const std::vector<std::string>& cluster_ids,
                                      const std::string& reviewer) {
  require_writable();
  std::set<std::string> ids(cluster_ids.begin(), cluster_ids.end());
  if (ids.size() < 2) throw Error(ErrorCode::kFewerThanTwo, "merge needs at least two distinct clusters");
  std::unique_lock lock(mu_);

  std::vector<const Cluster*> sources;
  for (const auto& id : ids) {
    auto live = std::find_if(state_.clusters.begin(), state_.clusters.end(),
                             [&](const Cluster& c) { return c.cluster_id == id; });
    if (live != state_.clusters.end()) {
      sources.push_back(&*live);
      continue;
    }
    bool retired = std::any_of(state_.retired.begin(), state_.retired.end(),
                               [&](const Cluster& c) { return c.cluster_id == id; });
    throw Error(retired ? ErrorCode::kRetiredCluster : ErrorCode::kUnknownCluster,
                (retired ? "retired cluster " : "unknown cluster ") + id);
  }

  Cluster merged;
  merged.cluster_id = "m" + std::to_string(state_.next_merge);
  merged.provenance = Provenance::kMerged;
  const Cluster* label_source = sources.front();
  for (const Cluster* c : sources) {
    merged.member_ids.insert(merged.member_ids.end(), c->member_ids.begin(), c->member_ids.end());
    if (c->member_ids.front() < label_source->member_ids.front()) label_source = c;
  }
  std::sort(merged.member_ids.begin(), merged.member_ids.end());
  merged.label = label_source->label;

  ClusterCorrection correction;
  correction.correction_id = "k" + std::to_string(state_.corrections.size());
  correction.merged_cluster_ids.assign(ids.begin(), ids.end());
  correction.result_cluster_id = merged.cluster_id;
  correction.reviewer = reviewer;
  correction.applied_at = clock_();

  std::vector<OfferKey> unscored;
  auto scores = scoring::score_cluster(merged, state_.offers, state_.config.scoring,
                                       correction.applied_at, &unscored);
  commit(Json{{"type", "merge"},
              {"correction", correction},
              {"cluster", merged},
              {"scores", scores},
              {"unscored", keys_json(std::set<OfferKey>(unscored.begin(), unscored.end()))}});
  return MergeResult{std::move(correction), std::move(merged), std::move(scores)};
}

SuspiciousPage Workspace::list_suspicious(double threshold, std::size_t limit,
                                          std::size_t offset) const {
  std::shared_lock lock(mu_);
  if (state_.scores.empty()) throw Error(ErrorCode::kNoScores, "no scores; run the score stage");
  std::vector<const ScoreBreakdown*> hits;
  for (const auto& [k, sb] : state_.scores) {
    if (sb.composite < threshold) hits.push_back(&sb);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const ScoreBreakdown* a, const ScoreBreakdown* b) {
    return a->composite < b->composite;
  });
  SuspiciousPage page;
  page.total = static_cast<std::int64_t>(hits.size());
  for (std::size_t i = offset; i < hits.size() && page.items.size() < limit; ++i) {
    const ScoreBreakdown& sb = *hits[i];
    page.items.push_back(
        SuspiciousItem{state_.offers.at(sb.offer_ref), sb, current_verdict(state_, sb.offer_ref)});
  }
  return page;
}

std::vector<Cluster> Workspace::clusters() const {
  std::shared_lock lock(mu_);
  return state_.clusters;
}

ClusterDetail Workspace::cluster_detail(const std::string& cluster_id) const {
  std::shared_lock lock(mu_);
  ClusterDetail d;
  auto match = [&](const Cluster& c) { return c.cluster_id == cluster_id; };
  auto live = std::find_if(state_.clusters.begin(), state_.clusters.end(), match);
  if (live != state_.clusters.end()) {
    d.cluster = *live;
  } else {
    auto old = std::find_if(state_.retired.begin(), state_.retired.end(), match);
    if (old == state_.retired.end()) throw Error(ErrorCode::kUnknownCluster, "unknown cluster " + cluster_id);
    d.cluster = *old;
    d.retired = true;
  }
  for (const auto& key : d.cluster.member_ids) {
    d.offers.push_back(state_.offers.at(key));
    auto sc = state_.scores.find(key);
    if (sc != state_.scores.end() && sc->second.cluster_id == cluster_id) d.scores.push_back(sc->second);
  }
  return d;
}

evaluation::ThresholdSweep Workspace::sweep(const std::vector<double>& thresholds) const {
  std::shared_lock lock(mu_);
  if (state_.scores.empty()) throw Error(ErrorCode::kNoScores, "no scores; run the score stage");
  return evaluation::sweep(score_list(state_), state_.verdicts, thresholds);
}

std::vector<evaluation::SellerRow> Workspace::seller_report(const std::vector<double>& thresholds) const {
  std::shared_lock lock(mu_);
  if (state_.scores.empty()) throw Error(ErrorCode::kNoScores, "no scores; run the score stage");
  evaluation::validate_thresholds(thresholds);
  return evaluation::seller_report(score_list(state_), state_.offers, thresholds);
}

std::vector<fs::path> Workspace::write_reports() const {
  State s = state();
  std::vector<fs::path> written;
  if (s.scores.empty()) return written;
  fs::create_directories(root_ / "reports");
  Json header{{"as_of", s.as_of}, {"config_fingerprint", s.config.fingerprint()}};

  bool labeled = std::any_of(s.verdicts.begin(), s.verdicts.end(), [&](const Verdict& v) {
    return current_label(s, v.offer_ref) != VerdictLabel::kUnknown;
  });
  if (labeled) {
    auto sw = evaluation::sweep(score_list(s), s.verdicts, s.config.thresholds);
    Json doc = header;
    doc["sweep"] = sw;
    write_text_atomic(root_ / "reports/sweep.json", doc.dump(2) + "\n");
    write_text_atomic(root_ / "reports/sweep.csv", evaluation::sweep_csv(sw));
    written.push_back(root_ / "reports/sweep.json");
    written.push_back(root_ / "reports/sweep.csv");
  }
  auto rows = evaluation::seller_report(score_list(s), s.offers, s.config.thresholds);
  Json doc = header;
  doc["sellers"] = rows;
  write_text_atomic(root_ / "reports/sellers.json", doc.dump(2) + "\n");
  write_text_atomic(root_ / "reports/sellers.csv", evaluation::seller_csv(rows));
  written.push_back(root_ / "reports/sellers.json");
  written.push_back(root_ / "reports/sellers.csv");
  return written;
}

void Workspace::compact() {
  require_writable();
  std::unique_lock lock(mu_);
  write_text_atomic(root_ / kJournal,
                    canonical(Json{{"type", "snapshot"}, {"state", state_.to_json()}}) + "\n");
}

}  // namespace triage::workspace
