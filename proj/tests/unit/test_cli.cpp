#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "../support/workspace_util.hpp"
#include "triage/core/json_codec.hpp"

using namespace triage;

namespace {

int run(const std::string& args, const std::filesystem::path& log) {
  std::string cmd = std::string("\"") + TRIAGE_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli end to end with exit codes") {
  testgen::TempDir dir("cli");
  const auto ws = dir.path / "ws";
  const auto fx = dir.path / "fx";
  const auto log = dir.path / "out.txt";
  const std::string w = "-w \"" + ws.string() + "\" ";

  CHECK(run("", log) == 1);
  CHECK(run("frobnicate", log) == 1);
  CHECK(run("--help", log) == 0);

  CHECK(run("gen-fixture --seed 3 --offers 80 --out \"" + fx.string() + "\"", log) == 0);
  CHECK(std::filesystem::exists(fx / "feed.jsonl"));
  CHECK(std::filesystem::exists(fx / "labels.jsonl"));

  CHECK(run(w + "score", log) == 2);  // no workspace yet
  CHECK(run(w + "init", log) == 0);
  CHECK(run(w + "init", log) == 2);
  CHECK(run(w + "score", log) == 2);  // nothing clustered
  CHECK(testgen::slurp(log).find("missing_prerequisite") != std::string::npos);

  CHECK(run(w + "ingest --input \"" + (fx / "feed.jsonl").string() + "\" --rules \"" TRIAGE_SOURCE_DIR
                "/data/rules/perfume.json\"",
            log) == 0);
  CHECK(read_json_file(ws / "config.json")["ingest_rules"]["synonym_map"].contains("eau de toilette"));
  CHECK(run(w + "cluster", log) == 0);
  CHECK(run(w + "score", log) == 0);
  CHECK(run(w + "suspicious --threshold 0.7 --limit 3", log) == 0);
  CHECK(Json::parse(testgen::slurp(log)).contains("items"));
  CHECK(run(w + "report", log) == 2);  // no labels yet

  CHECK(run(w + "evaluate --labels \"" + (fx / "labels.jsonl").string() + "\" --thresholds 0.6,0.7", log) == 0);
  CHECK(testgen::slurp(log).find("threshold") != std::string::npos);
  CHECK(std::filesystem::exists(ws / "reports" / "sweep.csv"));
  CHECK(run(w + "evaluate --labels \"" + (fx / "labels.jsonl").string() + "\" --thresholds 0.7,0.6", log) == 2);

  const auto csv = dir.path / "sweep.csv";
  CHECK(run(w + "report --csv \"" + csv.string() + "\"", log) == 0);
  CHECK(testgen::slurp(csv).rfind("threshold,recall,precision,f_measure", 0) == 0);
  CHECK(run(w + "sellers", log) == 0);
  CHECK(testgen::slurp(log).rfind("seller_id,", 0) == 0);

  CHECK(run(w + "merge --clusters c0", log) == 2);
  CHECK(run(w + "merge --clusters c0,c1 --reviewer me", log) == 0);
  CHECK(run(w + "merge --clusters c0,c2", log) == 2);
  CHECK(run(w + "run --stages cluster,score", log) == 0);
  CHECK(run(w + "run --stages dance", log) == 2);
  CHECK(run(w + "compact", log) == 0);

  CHECK(run(w + "querygen --products \"" + (fx / "products.json").string() + "\" --adapter replay:\"" +
                (fx / "feed.jsonl").string() + "\"",
            log) == 0);
  CHECK(Json::parse(testgen::slurp(log))["candidates"] == 80);
  CHECK(std::filesystem::exists(ws / "queries.jsonl"));
  CHECK(run(w + "querygen --products \"" + (fx / "products.json").string() + "\" --adapter carrier-pigeon", log) == 2);
  CHECK(run(w + "ingest", log) == 0);
  CHECK(run(w + "querygen --adapter mock", log) == 1);

  const std::string w2 = "-w \"" + (dir.path / "ws2").string() + "\" ";
  CHECK(run(w2 + "init --config \"" TRIAGE_SOURCE_DIR "/data/config/multi_indicator.json\"", log) == 0);
  CHECK(run(w2 + "run --stages ingest,cluster,score", log) == 2);  // nothing staged
  CHECK(run(w2 + "ingest --input \"" + (fx / "feed.jsonl").string() + "\"", log) == 0);
  CHECK(run(w2 + "run --stages cluster,score", log) == 0);
  auto first = Json::parse(testgen::slurp(dir.path / "ws2" / "scores.jsonl").substr(
      0, testgen::slurp(dir.path / "ws2" / "scores.jsonl").find('\n')));
  CHECK(first["weights"].size() >= 2);
}
