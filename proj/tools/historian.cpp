// Command-line front end: ingest corpora, run assessments and experiment
// protocols, and inspect prompts, folds, slices, and clone clusters.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "historian/clonedet.hpp"
#include "historian/corpus.hpp"
#include "historian/errors.hpp"
#include "historian/harness.hpp"
#include "historian/inference.hpp"
#include "historian/labelparse.hpp"
#include "historian/metrics.hpp"
#include "historian/oracle.hpp"
#include "historian/promptkit.hpp"
#include "historian/refset.hpp"
#include "json.hpp"

namespace {

using historian::Error;
using historian::ErrorCode;
using historian::RunConfig;
using nlohmann::json;

// Reports go to --out when given, stdout otherwise.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

bool is_backend_failure(ErrorCode code) {
  return code == ErrorCode::BackendUnreachable || code == ErrorCode::MockMiss ||
         code == ErrorCode::FallbackUnavailable;
}

// Options shared by every subcommand that builds a RunConfig. Flags
// override values from --config, which overrides built-in defaults.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> config_id, backend, relations, mock_default, url,
      model, cache, fallback, lexicon, nli_endpoint, templates;
  std::optional<double> temperature, theta;
  std::optional<long long> timeout_ms;
  std::optional<int> retries, inflight, workers, baseline_year;
  std::optional<long long> strong_min, moderate_min;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration JSON file");
    cmd->add_option("--config-id", config_id,
                    "prompt configuration id, e.g. scc-cc-diff");
    cmd->add_option("--backend", backend, "oracle backend: mock or http");
    cmd->add_option("--relations", relations,
                    "mock fixture: relationship JSONL "
                    "{candidate, reference, task, label}");
    cmd->add_option("--mock-default", mock_default,
                    "mock response for pairs missing from the fixture");
    cmd->add_option("--url", url, "oracle HTTP endpoint")
        ->envname("ORACLE_URL");
    cmd->add_option("--model", model, "oracle model name")
        ->envname("ORACLE_MODEL");
    cmd->add_option("--timeout-ms", timeout_ms, "oracle request timeout")
        ->envname("ORACLE_TIMEOUT_MS");
    cmd->add_option("--temperature", temperature, "oracle sampling temperature");
    cmd->add_option("--retries", retries, "oracle retry budget");
    cmd->add_option("--inflight", inflight, "max concurrent oracle requests");
    cmd->add_option("--cache", cache, "append-only response cache JSONL");
    cmd->add_option("--fallback", fallback,
                    "stage-2 parser: lexical, remote, or none");
    cmd->add_option("--lexicon", lexicon, "lexicon JSON for the lexical parser");
    cmd->add_option("--nli-endpoint", nli_endpoint,
                    "endpoint for the remote stage-2 parser");
    cmd->add_option("--templates", templates, "prompt template directory");
    cmd->add_option("--workers", workers, "assessment worker threads");
    cmd->add_option("--theta", theta, "token-overlap clone threshold");
    cmd->add_option("--baseline-year", baseline_year,
                    "last year of the baseline era");
    cmd->add_option("--strong-min", strong_min,
                    "informative votes for the Strong stratum");
    cmd->add_option("--moderate-min", moderate_min,
                    "informative votes for the Moderate stratum");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig()
                                      : RunConfig::from_file(config_path);
    if (config_id) c.config_id = *config_id;
    if (backend) c.backend_kind = *backend;
    if (relations) c.relations_path = *relations;
    if (mock_default) c.mock_default = *mock_default;
    if (url) c.http.base_url = *url;
    if (model) c.http.model_name = *model;
    if (temperature) c.http.temperature = *temperature;
    if (timeout_ms) c.http.timeout_ms = *timeout_ms;
    if (retries) c.http.max_retries = *retries;
    if (inflight) c.http.max_inflight = *inflight;
    if (cache) c.cache_path = *cache;
    if (fallback) c.fallback_kind = *fallback;
    if (lexicon) c.lexicon_path = *lexicon;
    if (nli_endpoint) c.nli_endpoint = *nli_endpoint;
    if (templates) c.template_dir = *templates;
    if (workers) c.workers = *workers;
    if (theta) c.theta = *theta;
    if (baseline_year) c.baseline_year = *baseline_year;
    if (strong_min) c.strata.strong_min = *strong_min;
    if (moderate_min) c.strata.moderate_min = *moderate_min;
    return c;
  }
};

std::map<std::string, historian::CorrectnessLabel> corpus_truth(
    const historian::Corpus& corpus) {
  std::map<std::string, historian::CorrectnessLabel> truth;
  for (const historian::PatchRecord& rec : corpus.records()) {
    if (rec.label) truth[rec.patch_id] = *rec.label;
  }
  return truth;
}

int cmd_ingest(const std::string& manifest, const std::string& out,
               const std::string& rejects_path, bool ignore_ws) {
  historian::IngestResult result = historian::ingest(manifest, ignore_ws);
  historian::write_corpus_jsonl(result.corpus, out);
  if (!rejects_path.empty()) {
    std::ofstream rej(rejects_path, std::ios::binary);
    if (!rej) {
      throw Error(ErrorCode::IoError, "cannot write '" + rejects_path + "'");
    }
    for (const historian::ValidationReport& r : result.rejected) {
      rej << json{{"patch_id", r.patch_id},
                  {"status", historian::validation_status_str(r.status)},
                  {"detail", r.detail}}
                 .dump()
          << "\n";
    }
  }
  std::cout << "ingested " << result.corpus.size() << " patches -> " << out
            << " (" << result.rejected.size() << " rejected, "
            << result.dedup.removed.size() << " duplicates removed)\n";
  return 0;
}

int cmd_assess(const std::string& corpus_path, const ConfigFlags& flags,
               const std::string& candidate, const std::string& out) {
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  std::vector<historian::AssessmentResult> results =
      historian::run_assess(corpus, flags.resolve(), candidate);
  if (out.empty()) {
    for (const historian::AssessmentResult& r : results) {
      std::cout << historian::assessment_to_json(r).dump() << "\n";
    }
  } else {
    historian::write_assessments_jsonl(results, out);
  }
  return 0;
}

int cmd_loto(const std::string& corpus_path, const ConfigFlags& flags,
             const std::string& out, bool csv,
             const std::string& residual_out,
             const std::string& assessments_out) {
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  historian::LotoReport report = historian::run_loto(corpus, flags.resolve());
  write_output(out, csv ? report.to_csv() : json_text(report.to_json()));
  if (!residual_out.empty()) {
    historian::export_residual(report, corpus, residual_out);
  }
  if (!assessments_out.empty()) {
    std::vector<historian::AssessmentResult> flat;
    flat.reserve(report.assessments.size());
    for (const auto& [tool, result] : report.assessments) {
      (void)tool;
      flat.push_back(result);
    }
    historian::write_assessments_jsonl(flat, assessments_out);
  }
  return 0;
}

int cmd_redundancy(const std::string& corpus_path, const ConfigFlags& flags,
                   const std::string& out, bool csv) {
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  RunConfig cfg = flags.resolve();
  historian::RedundancyRunReport report =
      historian::run_redundancy(corpus, cfg.baseline_year, cfg.theta);
  write_output(out, csv ? report.to_csv() : json_text(report.to_json()));
  return 0;
}

int cmd_replay(const std::string& corpus_path, const std::string& task,
               const std::string& tool, const ConfigFlags& flags,
               const std::string& out) {
  RunConfig cfg = flags.resolve();
  if (cfg.relations_path.empty()) {
    throw Error(ErrorCode::ConfigError, "replay needs --relations");
  }
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  historian::ReplayReport report = historian::run_oracle_replay(
      corpus, historian::read_relations_jsonl(cfg.relations_path),
      historian::parse_task_str(task), tool, cfg.strata);
  write_output(out, json_text(report.to_json()));
  return 0;
}

int cmd_merge_secondary(const std::string& assessments_path,
                        const std::string& secondary_path,
                        const std::string& corpus_path,
                        const std::string& out) {
  std::vector<historian::AssessmentResult> primary =
      historian::read_assessments_jsonl(assessments_path);

  std::ifstream in(secondary_path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read '" + secondary_path + "'");
  }
  std::map<std::string, historian::Verdict> secondary;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      secondary[j.at("candidate").get<std::string>()] =
          historian::parse_verdict_str(j.at("verdict").get<std::string>());
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::IoError, "bad secondary verdict at line " +
                                          std::to_string(lineno) + ": " +
                                          e.what());
    }
  }

  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  historian::MergeReport report =
      historian::merge_secondary(primary, secondary, corpus_truth(corpus));
  write_output(out, json_text(report.to_json()));
  return 0;
}

int cmd_metrics(const std::string& assessments_path,
                const std::string& corpus_path, const ConfigFlags& flags,
                const std::string& out) {
  std::vector<historian::AssessmentResult> results =
      historian::read_assessments_jsonl(assessments_path);
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  const std::map<std::string, historian::CorrectnessLabel> truth =
      corpus_truth(corpus);
  RunConfig cfg = flags.resolve();

  historian::ConfusionMatrix m = historian::confusion(results, truth);
  json j;
  j["confusion"] = historian::confusion_to_json(m);
  j["coverage"] = historian::coverage(m);
  j["accuracy_covered"] = m.covered() > 0
                              ? json(historian::accuracy_covered(m))
                              : json(nullptr);
  if (m.unknown == 0 && m.n() > 0) {
    auto [acc, f1] = historian::global_accuracy_f1(m);
    j["global"] = {{"accuracy", acc}, {"f1", f1}};
  } else {
    j["global"] = nullptr;
  }

  // Agreement between covered verdicts and ground truth.
  std::vector<std::string> rater_a, rater_b;
  for (const historian::AssessmentResult& r : results) {
    if (r.verdict == historian::Verdict::Unknown) continue;
    auto it = truth.find(r.candidate_id);
    if (it == truth.end()) continue;
    rater_a.push_back(historian::verdict_str(r.verdict));
    rater_b.push_back(historian::label_str(it->second));
  }
  j["kappa"] = rater_a.empty()
                   ? json(nullptr)
                   : json(historian::cohen_kappa(rater_a, rater_b));
  j["strata"] = historian::strata_to_json(
      historian::evidence_strata(results, cfg.strata));
  write_output(out, json_text(j));
  return 0;
}

int cmd_prompts(bool dump, const std::string& dump_dir) {
  if (dump) {
    const historian::TemplateSet& builtin = historian::TemplateSet::builtin();
    for (const auto& [entry, text] : builtin.by_entry) {
      const std::string path = dump_dir + "/" + entry + ".txt";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
      out << text;
    }
    std::cout << "wrote " << builtin.by_entry.size() << " templates to "
              << dump_dir << "\n";
    return 0;
  }
  for (const historian::PromptConfig& config : historian::catalog()) {
    std::cout << config.id() << "\t"
              << historian::strategy_str(config.strategy) << "\t"
              << historian::task_str(config.task) << "\t"
              << historian::representation_str(config.representation) << "\n";
  }
  return 0;
}

int cmd_cluster(const std::string& corpus_path, const std::string& bug,
                const ConfigFlags& flags, const std::string& overrides_path,
                bool global_mode, const std::string& out) {
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  std::vector<historian::PatchRecord> patches;
  if (bug.empty()) {
    patches = corpus.records();
  } else {
    for (const historian::PatchRecord* rec :
         corpus.for_bug(historian::BugId::parse(bug))) {
      patches.push_back(*rec);
    }
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  if (!overrides_path.empty()) {
    std::ifstream in(overrides_path, std::ios::binary);
    if (!in) {
      throw Error(ErrorCode::IoError, "cannot read '" + overrides_path + "'");
    }
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        json j = json::parse(line);
        overrides.emplace_back(j.at("left").get<std::string>(),
                               j.at("right").get<std::string>());
      } catch (const std::exception& e) {
        throw Error(ErrorCode::IoError, "bad override at line " +
                                            std::to_string(lineno) + ": " +
                                            e.what());
      }
    }
  }

  RunConfig cfg = flags.resolve();
  historian::ClusterSet set =
      historian::cluster(patches, cfg.theta, overrides, global_mode);
  json edges = json::array();
  for (const historian::ClusterEdge& e : set.edges) {
    edges.push_back({{"a", e.a},
                     {"b", e.b},
                     {"stage", historian::match_stage_str(e.stage)},
                     {"manual", e.manual}});
  }
  write_output(out, json_text({{"clusters", set.clusters},
                               {"edges", std::move(edges)}}));
  return 0;
}

int cmd_folds(const std::string& corpus_path, const std::string& out) {
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  json folds = json::array();
  for (const historian::LotoFold& fold : historian::loto_folds(corpus)) {
    json candidates = json::array();
    for (const historian::PatchRecord* c : fold.candidates) {
      candidates.push_back(c->patch_id);
    }
    json refs = json::object();
    for (const auto& [bug, refset] : fold.reference_index) {
      json ids = json::array();
      for (const auto& [rec, label] : refset.entries) {
        ids.push_back({{"patch_id", rec->patch_id},
                       {"label", historian::label_str(label)}});
      }
      refs[bug.str()] = std::move(ids);
    }
    folds.push_back({{"tool", fold.held_out_tool},
                     {"candidates", std::move(candidates)},
                     {"references", std::move(refs)}});
  }
  write_output(out, json_text({{"folds", std::move(folds)}}));
  return 0;
}

int cmd_slices(const std::string& corpus_path, const ConfigFlags& flags,
               const std::string& out) {
  historian::Corpus corpus = historian::read_corpus_jsonl(corpus_path);
  RunConfig cfg = flags.resolve();
  std::vector<std::string> warnings;
  json slices = json::array();
  for (const historian::TemporalSlice& slice :
       historian::temporal_slices(corpus, cfg.baseline_year, &warnings)) {
    slices.push_back({{"year", slice.cutoff_year},
                      {"tool", slice.tool},
                      {"baseline", slice.baseline},
                      {"added", slice.added}});
  }
  write_output(out, json_text({{"baseline_year", cfg.baseline_year},
                               {"slices", std::move(slices)},
                               {"warnings", warnings}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evidence-based assessment of program-repair patches"};
  app.require_subcommand(1);
  int rc = 0;

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "build a validated corpus JSONL from a patch manifest");
  std::string in_manifest, in_out = "corpus.jsonl", in_rejects;
  bool in_ignore_ws = false;
  ingest->add_option("--manifest", in_manifest, "manifest JSON")->required();
  ingest->add_option("--out", in_out, "corpus JSONL output path");
  ingest->add_option("--rejects", in_rejects, "rejected-patch report JSONL");
  ingest->add_flag("--ignore-whitespace", in_ignore_ws,
                   "relax context matching when applying diffs");
  ingest->callback([&] {
    rc = cmd_ingest(in_manifest, in_out, in_rejects, in_ignore_ws);
  });

  // assess
  auto* assess = app.add_subcommand(
      "assess", "assess candidates against their historical references");
  std::string as_corpus, as_candidate, as_out;
  ConfigFlags as_flags;
  assess->add_option("--corpus", as_corpus, "corpus JSONL")->required();
  assess->add_option("--candidate", as_candidate,
                     "assess a single patch id (default: all tool patches)");
  assess->add_option("--out", as_out, "assessment JSONL output path");
  as_flags.attach(assess);
  assess->callback(
      [&] { rc = cmd_assess(as_corpus, as_flags, as_candidate, as_out); });

  // loto
  auto* loto = app.add_subcommand(
      "loto", "leave-one-tool-out cross-validation over the corpus");
  std::string lo_corpus, lo_out, lo_residual, lo_assessments;
  bool lo_csv = false;
  ConfigFlags lo_flags;
  loto->add_option("--corpus", lo_corpus, "corpus JSONL")->required();
  loto->add_option("--out", lo_out, "report output path (default stdout)");
  loto->add_flag("--csv", lo_csv, "emit the per-fold table as CSV");
  loto->add_option("--residual-out", lo_residual,
                   "write residual Unknown candidates as corpus JSONL");
  loto->add_option("--assessments-out", lo_assessments,
                   "write per-candidate assessments as JSONL");
  lo_flags.attach(loto);
  loto->callback([&] {
    rc = cmd_loto(lo_corpus, lo_flags, lo_out, lo_csv, lo_residual,
                  lo_assessments);
  });

  // redundancy
  auto* redundancy = app.add_subcommand(
      "redundancy", "longitudinal clone redundancy across temporal slices");
  std::string re_corpus, re_out;
  bool re_csv = false;
  ConfigFlags re_flags;
  redundancy->add_option("--corpus", re_corpus, "corpus JSONL")->required();
  redundancy->add_option("--out", re_out, "report output path");
  redundancy->add_flag("--csv", re_csv, "emit the slice table as CSV");
  re_flags.attach(redundancy);
  redundancy->callback(
      [&] { rc = cmd_redundancy(re_corpus, re_flags, re_out, re_csv); });

  // replay
  auto* replay = app.add_subcommand(
      "replay", "rerun assessment from annotated relationship records");
  std::string rp_corpus, rp_task = "cc", rp_tool, rp_out;
  ConfigFlags rp_flags;
  replay->add_option("--corpus", rp_corpus, "corpus JSONL")->required();
  replay->add_option("--task", rp_task, "relationship task: cc, ss, or se");
  replay->add_option("--tool", rp_tool,
                     "restrict candidates to one tool (default: all)");
  replay->add_option("--out", rp_out, "report output path");
  rp_flags.attach(replay);
  replay->callback(
      [&] { rc = cmd_replay(rp_corpus, rp_task, rp_tool, rp_flags, rp_out); });

  // merge-secondary
  auto* merge = app.add_subcommand(
      "merge-secondary",
      "fill residual Unknowns with secondary verdicts and score globally");
  std::string mg_assessments, mg_secondary, mg_corpus, mg_out;
  merge->add_option("--assessments", mg_assessments, "primary assessment JSONL")
      ->required();
  merge
      ->add_option("--secondary", mg_secondary,
                   "secondary verdict JSONL {candidate, verdict}")
      ->required();
  merge->add_option("--corpus", mg_corpus, "corpus JSONL with ground truth")
      ->required();
  merge->add_option("--out", mg_out, "report output path");
  merge->callback([&] {
    rc = cmd_merge_secondary(mg_assessments, mg_secondary, mg_corpus, mg_out);
  });

  // metrics
  auto* metrics = app.add_subcommand(
      "metrics", "score an assessment file against corpus ground truth");
  std::string mt_assessments, mt_corpus, mt_out;
  ConfigFlags mt_flags;
  metrics
      ->add_option("--assessments", mt_assessments, "assessment JSONL")
      ->required();
  metrics->add_option("--corpus", mt_corpus, "corpus JSONL with ground truth")
      ->required();
  metrics->add_option("--out", mt_out, "report output path");
  mt_flags.attach(metrics);
  metrics->callback(
      [&] { rc = cmd_metrics(mt_assessments, mt_corpus, mt_flags, mt_out); });

  // prompts
  auto* prompts = app.add_subcommand(
      "prompts", "list the prompt catalog or dump the built-in templates");
  bool pr_list = false;
  std::string pr_dump;
  prompts->add_flag("--list", pr_list, "print the catalog (default)");
  prompts->add_option("--dump", pr_dump,
                      "write built-in templates into this directory");
  prompts->callback([&] { rc = cmd_prompts(!pr_dump.empty(), pr_dump); });

  // cluster
  auto* cluster = app.add_subcommand(
      "cluster", "group patches by the clone cascade");
  std::string cl_corpus, cl_bug, cl_overrides, cl_out;
  bool cl_global = false;
  ConfigFlags cl_flags;
  cluster->add_option("--corpus", cl_corpus, "corpus JSONL")->required();
  cluster->add_option("--bug", cl_bug, "restrict to one bug, e.g. Chart-24");
  cluster->add_option("--overrides", cl_overrides,
                      "manual same-cluster pairs JSONL {left, right, note}");
  cluster->add_flag("--global", cl_global,
                    "allow clustering across different bugs");
  cluster->add_option("--out", cl_out, "report output path");
  cl_flags.attach(cluster);
  cluster->callback([&] {
    rc = cmd_cluster(cl_corpus, cl_bug, cl_flags, cl_overrides, cl_global,
                     cl_out);
  });

  // folds
  auto* folds = app.add_subcommand(
      "folds", "print the leave-one-tool-out fold layout");
  std::string fo_corpus, fo_out;
  folds->add_option("--corpus", fo_corpus, "corpus JSONL")->required();
  folds->add_option("--out", fo_out, "report output path");
  folds->callback([&] { rc = cmd_folds(fo_corpus, fo_out); });

  // slices
  auto* slices = app.add_subcommand(
      "slices", "print the temporal slice layout");
  std::string sl_corpus, sl_out;
  ConfigFlags sl_flags;
  slices->add_option("--corpus", sl_corpus, "corpus JSONL")->required();
  slices->add_option("--out", sl_out, "report output path");
  sl_flags.attach(slices);
  slices->callback([&] { rc = cmd_slices(sl_corpus, sl_flags, sl_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_backend_failure(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
