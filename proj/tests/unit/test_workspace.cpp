#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "../support/tables.hpp"
#include "../support/workspace_util.hpp"
#include "triage/core/error.hpp"
#include "triage/evaluation/evaluation.hpp"
#include "triage/workspace/workspace.hpp"

using namespace triage;
using namespace triage::workspace;
using testgen::TempDir;

namespace {

const std::set<Stage> kAll{Stage::kIngest, Stage::kCluster, Stage::kScore};

fixture::Fixture small_fixture(std::int64_t superfluous = 0) {
  fixture::FixtureOptions o;
  o.seed = 11;
  o.offers = 120;
  o.superfluous = superfluous;
  return fixture::generate_fixture(o);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIoError;
}

std::unique_ptr<Workspace> scored_workspace(const TempDir& dir, const fixture::Fixture& fx) {
  auto ws = Workspace::init(dir.path, {}, testgen::ticking_clock());
  auto input = testgen::candidates_of(fx);
  ws->run_pipeline(kAll, &input);
  return ws;
}

}  // namespace

TEST_CASE("pipeline summary counts") {
  TempDir dir("ws_counts");
  auto fx = small_fixture();
  auto ws = Workspace::init(dir.path, {}, testgen::ticking_clock());
  auto input = testgen::candidates_of(fx);
  auto summary = ws->run_pipeline(kAll, &input);
  CHECK(summary.stages == std::vector<std::string>{"ingest", "cluster", "score"});
  CHECK(summary.counts.at("ingest").at("offers") == 120);
  CHECK(summary.counts.at("cluster").at("clusters") > 0);
  auto st = ws->state();
  CHECK(static_cast<std::int64_t>(st.scores.size() + st.unscored.size()) == summary.counts.at("ingest").at("offers"));
  CHECK(summary.counts.at("score").at("scores") == static_cast<std::int64_t>(st.scores.size()));
  CHECK(st.run_log.size() == 3);
  for (const auto& e : st.run_log) CHECK(e.config_fingerprint == st.config.fingerprint());

  // the current cluster set partitions the clustered offers
  std::map<OfferKey, int> seen;
  for (const auto& c : st.clusters)
    for (const auto& k : c.member_ids) ++seen[k];
  CHECK(seen.size() == st.offers.size());
  CHECK(std::all_of(seen.begin(), seen.end(), [](const auto& kv) { return kv.second == 1; }));
}

TEST_CASE("missing prerequisites") {
  TempDir dir("ws_prereq");
  auto ws = Workspace::init(dir.path);
  CHECK(code_of([&] { ws->run_pipeline({Stage::kScore}); }) == ErrorCode::kMissingPrerequisite);
  CHECK(code_of([&] { ws->run_pipeline({Stage::kCluster}); }) == ErrorCode::kMissingPrerequisite);
  CHECK(code_of([&] { ws->run_pipeline({Stage::kIngest}); }) == ErrorCode::kMissingPrerequisite);
  CHECK(code_of([&] { ws->list_suspicious(0.7, 10, 0); }) == ErrorCode::kNoScores);
}

TEST_CASE("staged candidates feed ingest") {
  TempDir dir("ws_stage");
  auto fx = small_fixture();
  auto ws = Workspace::init(dir.path);
  ws->stage_candidates(testgen::candidates_of(fx));
  auto s = ws->run_pipeline({Stage::kIngest});
  CHECK(s.counts.at("ingest").at("offers") == 120);
}

TEST_CASE("rerun on unchanged data reproduces the dumps byte for byte") {
  TempDir dir("ws_det");
  auto fx = small_fixture();
  auto ws = scored_workspace(dir, fx);
  auto clusters = testgen::slurp(dir.path / "clusters.jsonl");
  auto scores = testgen::slurp(dir.path / "scores.jsonl");
  REQUIRE_FALSE(scores.empty());
  auto input = testgen::candidates_of(fx);
  ws->run_pipeline(kAll, &input);
  CHECK(testgen::slurp(dir.path / "clusters.jsonl") == clusters);
  CHECK(testgen::slurp(dir.path / "scores.jsonl") == scores);

  // a second, independent workspace with a different clock agrees too
  TempDir other("ws_det2");
  auto ws2 = Workspace::init(other.path, {}, testgen::ticking_clock(500));
  ws2->run_pipeline(kAll, &input);
  CHECK(testgen::slurp(other.path / "clusters.jsonl") == clusters);
}

TEST_CASE("journal replay reconstructs state, also after compaction") {
  TempDir dir("ws_replay");
  auto fx = small_fixture(2);
  auto ws = scored_workspace(dir, fx);
  ws->import_verdicts(fx.labels);
  auto clusters = ws->clusters();
  REQUIRE(clusters.size() >= 2);
  ws->merge_clusters({clusters[0].cluster_id, clusters[1].cluster_id}, "tester");
  auto live = ws->state();
  CHECK(replay(dir.path / "journal.jsonl") == live);
  ws.reset();

  auto reopened = Workspace::open(dir.path);
  CHECK(reopened->state() == live);
  reopened->compact();
  auto journal = testgen::slurp(dir.path / "journal.jsonl");
  CHECK(std::count(journal.begin(), journal.end(), '\n') == 1);
  CHECK(replay(dir.path / "journal.jsonl") == live);
  reopened.reset();
  CHECK(Workspace::open(dir.path)->state() == live);
}

TEST_CASE("torn final journal line is ignored, earlier damage is not") {
  TempDir dir("ws_torn");
  auto fx = small_fixture();
  auto ws = scored_workspace(dir, fx);
  auto live = ws->state();
  ws.reset();
  {
    std::ofstream out(dir.path / "journal.jsonl", std::ios::app);
    out << R"({"type":"verdicts","verd)";
  }
  CHECK(replay(dir.path / "journal.jsonl") == live);

  std::string text = testgen::slurp(dir.path / "journal.jsonl");
  text.insert(text.find('\n') + 1, "{broken\n");
  {
    std::ofstream out(dir.path / "journal.jsonl", std::ios::trunc);
    out << text;
  }
  CHECK(code_of([&] { replay(dir.path / "journal.jsonl"); }) == ErrorCode::kParseError);
}

TEST_CASE("verdicts supersede and keep history") {
  TempDir dir("ws_verdict");
  auto fx = small_fixture();
  auto ws = scored_workspace(dir, fx);
  OfferKey k = ws->state().offers.begin()->first;
  ws->submit_verdict(Verdict{k, VerdictLabel::kGenuine, "a", std::nullopt, ""});
  auto second = ws->submit_verdict(Verdict{k, VerdictLabel::kCounterfeit, "b", "looks fake", ""});
  CHECK_FALSE(second.decided_at.empty());
  auto st = ws->state();
  CHECK(std::count_if(st.verdicts.begin(), st.verdicts.end(), [&](const Verdict& v) { return v.offer_ref == k; }) == 2);
  CHECK(evaluation::current_labels(st.verdicts).at(k) == VerdictLabel::kCounterfeit);
  CHECK(code_of([&] {
          ws->submit_verdict(Verdict{{"ebay", "nope"}, VerdictLabel::kGenuine, "a", std::nullopt, ""});
        }) == ErrorCode::kUnknownOffer);

  std::int64_t skipped = 0;
  auto accepted = ws->import_verdicts({Verdict{{"ebay", "nope"}, VerdictLabel::kGenuine, "a", std::nullopt, "x"},
                                       Verdict{k, VerdictLabel::kGenuine, "a", std::nullopt, "x"}},
                                      &skipped);
  CHECK(accepted == 1);
  CHECK(skipped == 1);
}

TEST_CASE("merge retires sources and re-scores only the merged cluster") {
  TempDir dir("ws_merge");
  auto fx = small_fixture(2);
  auto ws = scored_workspace(dir, fx);
  auto before = ws->state();
  // two multi-member clusters in the same currency
  std::vector<std::string> ids;
  for (const auto& c : before.clusters) {
    if (c.member_ids.size() >= 2 && ids.size() < 2) ids.push_back(c.cluster_id);
  }
  REQUIRE(ids.size() == 2);
  auto result = ws->merge_clusters({ids[1], ids[0]}, "tester");
  CHECK(result.cluster.cluster_id == "m0");
  CHECK(result.cluster.provenance == Provenance::kMerged);
  CHECK(result.correction.correction_id == "k0");
  CHECK(result.correction.reviewer == "tester");
  auto after = ws->state();
  CHECK(after.retired.size() == 2);
  CHECK(after.clusters.size() == before.clusters.size() - 1);

  std::set<OfferKey> merged(result.cluster.member_ids.begin(), result.cluster.member_ids.end());
  for (const auto& [k, s] : after.scores) {
    if (merged.count(k)) {
      CHECK(s.cluster_id == "m0");
      CHECK(s.indicator_scores.at("price_band") <= before.scores.at(k).indicator_scores.at("price_band"));
    } else {
      CHECK(s == before.scores.at(k));
    }
  }

  CHECK(code_of([&] { ws->merge_clusters({ids[0], "m0"}, "t"); }) == ErrorCode::kRetiredCluster);
  CHECK(code_of([&] { ws->merge_clusters({"m0"}, "t"); }) == ErrorCode::kFewerThanTwo);
  CHECK(code_of([&] { ws->merge_clusters({"m0", "m0"}, "t"); }) == ErrorCode::kFewerThanTwo);
  CHECK(code_of([&] { ws->merge_clusters({"m0", "zzz"}, "t"); }) == ErrorCode::kUnknownCluster);

  auto detail = ws->cluster_detail(ids[0]);
  CHECK(detail.retired);
  CHECK(ws->cluster_detail("m0").scores.size() == result.scores.size());
  CHECK(code_of([&] { ws->cluster_detail("zzz"); }) == ErrorCode::kUnknownCluster);
}

TEST_CASE("new cluster run clears corrections") {
  TempDir dir("ws_recluster");
  auto ws = scored_workspace(dir, small_fixture(2));
  auto cs = ws->clusters();
  ws->merge_clusters({cs[0].cluster_id, cs[1].cluster_id}, "t");
  ws->run_pipeline({Stage::kCluster});
  auto st = ws->state();
  CHECK(st.retired.empty());
  CHECK(st.corrections.empty());
  CHECK(st.scores.empty());
  CHECK(st.clusters == cs);
}

TEST_CASE("suspicious listing on the 787-offer table fixture") {
  auto table = testgen::build_table_fixture(testgen::kAutomaticTable, 78, 787);
  REQUIRE(table.has_value());
  State st;
  st.ingested = st.clustered = true;
  st.as_of = "2026-01-01T00:00:00Z";
  Cluster c{"c0", {}, "table", Provenance::kAutomatic};
  for (const auto& s : table->scores) {
    Offer o;
    o.key = s.offer_ref;
    o.title = "offer " + s.offer_ref.offer_id;
    o.price_amount = Decimal::from_string("1");
    o.currency = "EUR";
    o.seller_id = "s";
    o.attributes["norm_title"] = o.title;
    st.offers[o.key] = o;
    st.scores[o.key] = s;
    c.member_ids.push_back(o.key);
  }
  std::sort(c.member_ids.begin(), c.member_ids.end());
  st.clusters.push_back(c);
  st.verdicts = table->verdicts;

  TempDir dir("ws_table");
  {
    std::ofstream out(dir.path / "journal.jsonl");
    out << canonical(Json{{"type", "snapshot"}, {"state", st.to_json()}}) << "\n";
  }
  auto ws = Workspace::open(dir.path, Mode::kReadOnly);
  auto page = ws->list_suspicious(0.7, 1000, 0);
  CHECK(page.total == 81);
  CHECK(page.items.size() == 81);
  CHECK(std::is_sorted(page.items.begin(), page.items.end(), [](const SuspiciousItem& a, const SuspiciousItem& b) {
    return a.score.composite < b.score.composite;
  }));
  CHECK(page.items[0].verdict.has_value());
  CHECK(ws->list_suspicious(0.0, 10, 0).items.empty());

  auto p1 = ws->list_suspicious(0.7, 10, 0);
  auto p2 = ws->list_suspicious(0.7, 10, 10);
  REQUIRE(p1.items.size() == 10);
  REQUIRE(p2.items.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(p1.items[i].offer.key == page.items[i].offer.key);
    CHECK(p2.items[i].offer.key == page.items[10 + i].offer.key);
  }

  auto sw = ws->sweep(evaluation::kDefaultThresholds);
  CHECK(std::abs(sw.reports[1].precision - 0.543) <= 0.001);
}

TEST_CASE("locking and read-only mode") {
  TempDir dir("ws_lock");
  auto writer = Workspace::init(dir.path);
  CHECK(code_of([&] { Workspace::open(dir.path); }) == ErrorCode::kWorkspaceLocked);
  auto reader = Workspace::open(dir.path, Mode::kReadOnly);
  CHECK(code_of([&] { reader->stage_candidates({}); }) == ErrorCode::kWorkspaceLocked);
  writer.reset();
  CHECK_NOTHROW(Workspace::open(dir.path));

  TempDir empty("ws_missing");
  CHECK(code_of([&] { Workspace::open(empty.path / "nothing"); }) == ErrorCode::kWorkspaceMissing);
  CHECK(code_of([&] { Workspace::init(dir.path); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("config round trip and validation") {
  WorkspaceConfig cfg;
  CHECK(WorkspaceConfig::from_json(cfg.to_json()).to_json() == cfg.to_json());
  Json bad = cfg.to_json();
  bad["clustering"]["min_pairwise_similarity"] = 2.0;
  CHECK(code_of([&] { WorkspaceConfig::from_json(bad); }) == ErrorCode::kConfigInvalid);
  Json weights = cfg.to_json();
  weights["evaluation"]["thresholds"] = {0.9, 0.6};
  CHECK(code_of([&] { WorkspaceConfig::from_json(weights); }) == ErrorCode::kConfigInvalid);

  TempDir dir("ws_config");
  auto ws = Workspace::init(dir.path);
  cfg.clustering.min_pairwise_similarity = 0.8;
  ws->set_config(cfg);
  CHECK(ws->config().fingerprint() == cfg.fingerprint());
  CHECK(Json::parse(testgen::slurp(dir.path / "config.json")) == cfg.to_json());
}

TEST_CASE("reports are written after labels exist") {
  TempDir dir("ws_reports");
  auto fx = small_fixture();
  auto ws = scored_workspace(dir, fx);
  CHECK(code_of([&] { ws->sweep({0.7}); }) == ErrorCode::kNoLabeledOffers);
  ws->import_verdicts(fx.labels);
  auto written = ws->write_reports();
  CHECK(written.size() == 4);
  CHECK(std::filesystem::exists(dir.path / "reports" / "sweep.csv"));
  CHECK(testgen::slurp(dir.path / "reports" / "sweep.csv").rfind("threshold,recall,precision,f_measure\n", 0) == 0);
  auto rows = ws->seller_report({0.7});
  CHECK_FALSE(rows.empty());
}
