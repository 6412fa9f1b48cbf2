// triage: command line front end for a counterfeit-offer triage workspace.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "triage/core/error.hpp"
#include "triage/core/json_codec.hpp"
#include "triage/evaluation/evaluation.hpp"
#include "triage/fixture/fixture.hpp"
#include "triage/querygen/adapters.hpp"
#include "triage/querygen/querygen.hpp"
#include "triage/simd/kernels.hpp"
#include "triage/workspace/http_api.hpp"
#include "triage/workspace/workspace.hpp"

namespace fs = std::filesystem;
using namespace triage;
using workspace::Stage;
using workspace::Workspace;

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<OfferCandidate> read_candidates(const fs::path& path) {
  std::vector<OfferCandidate> out;
  for (auto& row : read_jsonl(path)) out.push_back(OfferCandidate{std::move(row)});
  return out;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_sweep(const evaluation::ThresholdSweep& sw) {
  std::printf("%-9s %6s %6s %6s %5s %5s %5s\n", "threshold", "recall", "prec", "F", "TP", "FP", "flag");
  for (const auto& r : sw.reports) {
    std::printf("%-9g %6.3f %6.3f %6.3f %5lld %5lld %5lld\n", r.threshold, r.recall, r.precision,
                r.f_measure, static_cast<long long>(r.true_positives),
                static_cast<long long>(r.false_positives), static_cast<long long>(r.flagged_count));
  }
}

std::vector<double> thresholds_or(const std::string& text, const Workspace& ws) {
  return text.empty() ? ws.config().thresholds : evaluation::parse_thresholds(text);
}

std::set<querygen::Capability> parse_capabilities(const std::string& text) {
  std::set<querygen::Capability> caps;
  for (const auto& name : split_csv(text)) {
    auto c = querygen::parse_capability(name);
    if (!c) throw Error(ErrorCode::kInvalidArgument, "unknown capability '" + name + "'");
    caps.insert(*c);
  }
  return caps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfeit offer triage"};
  app.require_subcommand(1);
  std::string root = ".";
  app.add_option("-w,--workspace", root, "Workspace directory");

  auto* init = app.add_subcommand("init", "Create a workspace");
  std::string init_config;
  init->add_option("--config", init_config, "Unified config JSON")->check(CLI::ExistingFile);

  auto* qg = app.add_subcommand("querygen", "Generate queries and stage the retrieved candidates");
  std::string products_path, adapter_spec, capabilities = "keyword,category,code";
  qg->add_option("--products", products_path, "Product specs JSON")->required()->check(CLI::ExistingFile);
  qg->add_option("--adapter", adapter_spec, "mock or replay:PATH")->required();
  qg->add_option("--capabilities", capabilities, "Platform search capabilities");

  auto* ing = app.add_subcommand("ingest", "Clean and load offers");
  std::string input_path, rules_path;
  ing->add_option("--input", input_path, "Candidate JSONL (default: staged candidates)")
      ->check(CLI::ExistingFile);
  ing->add_option("--rules", rules_path, "Transform rule set JSON")->check(CLI::ExistingFile);

  auto* clu = app.add_subcommand("cluster", "Cluster the current offers");
  auto* sco = app.add_subcommand("score", "Score every clustered offer");

  auto* run = app.add_subcommand("run", "Run pipeline stages in order");
  std::string run_stages = "ingest,cluster,score";
  run->add_option("--stages", run_stages, "Comma separated stages");

  auto* eval = app.add_subcommand("evaluate", "Import verdict labels and sweep thresholds");
  std::string labels_path, eval_thresholds;
  eval->add_option("--labels", labels_path, "Verdict JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--thresholds", eval_thresholds, "e.g. 0.6,0.7,0.8,0.9");

  auto* rep = app.add_subcommand("report", "Threshold sweep over current verdicts");
  std::string csv_path, rep_thresholds;
  rep->add_option("--csv", csv_path, "Write the sweep as CSV");
  rep->add_option("--thresholds", rep_thresholds, "e.g. 0.6,0.7,0.8,0.9");

  auto* sel = app.add_subcommand("sellers", "Per-seller suspicion report");
  std::string sellers_csv, sel_thresholds;
  sel->add_option("--csv", sellers_csv, "Write the report as CSV");
  sel->add_option("--thresholds", sel_thresholds, "e.g. 0.6,0.7,0.8,0.9");

  auto* sus = app.add_subcommand("suspicious", "List offers below a threshold");
  double sus_threshold = 0.7;
  std::size_t sus_limit = 20, sus_offset = 0;
  sus->add_option("--threshold", sus_threshold);
  sus->add_option("--limit", sus_limit);
  sus->add_option("--offset", sus_offset);

  auto* mrg = app.add_subcommand("merge", "Merge clusters and re-score");
  std::string merge_ids, reviewer = "cli";
  mrg->add_option("--clusters", merge_ids, "Comma separated cluster ids")->required();
  mrg->add_option("--reviewer", reviewer);

  auto* cmp = app.add_subcommand("compact", "Rewrite the journal as one snapshot");

  auto* gen = app.add_subcommand("gen-fixture", "Write a seeded synthetic fixture");
  fixture::FixtureOptions fx;
  std::string fx_out = "fixture";
  gen->add_option("--seed", fx.seed);
  gen->add_option("--offers", fx.offers);
  gen->add_option("--fake-rate", fx.fake_rate);
  gen->add_option("--superfluous", fx.superfluous, "Planted superfluous cluster groups");
  gen->add_option("--discount-rate", fx.discount_rate);
  gen->add_option("--out", fx_out, "Output directory");

  auto* srv = app.add_subcommand("serve", "Serve the JSON API");
  int port = 8080;
  std::string host = "127.0.0.1";
  srv->add_option("--port", port);
  srv->add_option("--host", host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      auto f = fixture::generate_fixture(fx);
      auto paths = fixture::write_fixture(f, fx_out);
      Json out{{"offers", f.feed.size()},
               {"counterfeits", f.counterfeit_count},
               {"superfluous_offers", f.superfluous_offers},
               {"products", f.products.size()}};
      for (const auto& p : paths) out["files"].push_back(p.string());
      print(out);
      return 0;
    }
    if (*init) {
      workspace::WorkspaceConfig cfg;
      if (!init_config.empty()) cfg = workspace::WorkspaceConfig::from_json(read_json_file(init_config));
      auto ws = Workspace::init(root, cfg);
      print(Json{{"workspace", fs::absolute(root).string()}, {"config_fingerprint", cfg.fingerprint()}});
      return 0;
    }

    const bool read_only = *rep || *sel || *sus;
    auto ws = Workspace::open(root, read_only ? workspace::Mode::kReadOnly : workspace::Mode::kReadWrite);

    if (*qg) {
      auto specs = querygen::load_product_specs(products_path);
      auto plan = querygen::generate_queries(specs, parse_capabilities(capabilities));
      std::unique_ptr<querygen::PlatformAdapter> adapter;
      if (adapter_spec == "mock") {
        adapter = std::make_unique<querygen::MockAdapter>(std::vector<OfferCandidate>{});
      } else if (adapter_spec.rfind("replay:", 0) == 0) {
        adapter = std::make_unique<querygen::ReplayAdapter>(adapter_spec.substr(7));
      } else {
        throw Error(ErrorCode::kInvalidArgument, "adapter must be mock or replay:PATH");
      }
      auto result = querygen::execute_queries(plan.queries, *adapter);
      write_jsonl_of(ws->root() / "queries.jsonl", plan.queries);
      ws->stage_candidates(result.candidates);
      for (const auto& f : result.errors) {
        std::cerr << "query " << f.query_index << " failed: " << f.message << "\n";
      }
      print(Json{{"queries", plan.queries.size()},
                 {"unusable_specs", plan.unusable_specs},
                 {"candidates", result.candidates.size()},
                 {"adapter_errors", result.errors.size()}});
    } else if (*ing) {
      if (!rules_path.empty()) {
        auto cfg = ws->config();
        cfg.ingest_rules = ingest::TransformRuleSet::load(rules_path);
        ws->set_config(cfg);
      }
      if (input_path.empty()) {
        print(Json(ws->run_pipeline({Stage::kIngest})));
      } else {
        auto input = read_candidates(input_path);
        print(Json(ws->run_pipeline({Stage::kIngest}, &input)));
      }
    } else if (*clu) {
      print(Json(ws->run_pipeline({Stage::kCluster})));
    } else if (*sco) {
      print(Json(ws->run_pipeline({Stage::kScore})));
    } else if (*run) {
      std::set<Stage> stages;
      for (const auto& name : split_csv(run_stages)) {
        auto s = workspace::parse_stage(name);
        if (!s) throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + name + "'");
        stages.insert(*s);
      }
      print(Json(ws->run_pipeline(stages)));
    } else if (*eval) {
      std::int64_t skipped = 0;
      auto accepted = ws->import_verdicts(read_jsonl_as<Verdict>(labels_path), &skipped);
      auto sw = ws->sweep(thresholds_or(eval_thresholds, *ws));
      ws->write_reports();
      std::printf("imported %lld verdicts (%lld for unknown offers skipped)\n",
                  static_cast<long long>(accepted), static_cast<long long>(skipped));
      print_sweep(sw);
    } else if (*rep) {
      auto sw = ws->sweep(thresholds_or(rep_thresholds, *ws));
      print_sweep(sw);
      if (!csv_path.empty()) write_text_atomic(csv_path, evaluation::sweep_csv(sw));
    } else if (*sel) {
      auto rows = ws->seller_report(thresholds_or(sel_thresholds, *ws));
      if (!sellers_csv.empty()) write_text_atomic(sellers_csv, evaluation::seller_csv(rows));
      std::cout << evaluation::seller_csv(rows);
    } else if (*sus) {
      print(Json(ws->list_suspicious(sus_threshold, sus_limit, sus_offset)));
    } else if (*mrg) {
      print(Json(ws->merge_clusters(split_csv(merge_ids), reviewer)));
    } else if (*cmp) {
      ws->compact();
      std::printf("journal compacted\n");
    } else if (*srv) {
      workspace::ApiServer server(*ws);
      int bound = server.bind(host, port);
      if (bound < 0) throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
      std::printf("serving %s on http://%s:%d (kernels: %s)\n", fs::absolute(root).c_str(), host.c_str(),
                  bound, simd::to_string(simd::active_kernels().isa).data());
      std::fflush(stdout);
      server.listen();
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
