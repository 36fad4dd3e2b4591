#include "historian/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace historian {

using nlohmann::json;

// ---------------------------------------------------------------------------
// RunConfig

json RunConfig::to_json() const {
  json j;
  j["config_id"] = config_id;
  j["backend_kind"] = backend_kind;
  j["relations_path"] = relations_path;
  j["mock_default"] = mock_default ? json(*mock_default) : json(nullptr);
  j["http"] = {{"base_url", http.base_url},
               {"model_name", http.model_name},
               {"temperature", http.temperature},
               {"timeout_ms", http.timeout_ms},
               {"max_retries", http.max_retries},
               {"max_inflight", http.max_inflight}};
  j["theta"] = theta;
  j["cache_path"] = cache_path;
  j["fallback_kind"] = fallback_kind;
  j["lexicon_path"] = lexicon_path;
  j["nli_endpoint"] = nli_endpoint;
  j["template_dir"] = template_dir;
  j["workers"] = workers;
  j["strata"] = {{"strong_min", strata.strong_min},
                 {"moderate_min", strata.moderate_min}};
  j["baseline_year"] = baseline_year;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.config_id = j.value("config_id", c.config_id);
  c.backend_kind = j.value("backend_kind", c.backend_kind);
  c.relations_path = j.value("relations_path", c.relations_path);
  if (j.contains("mock_default") && !j.at("mock_default").is_null()) {
    c.mock_default = j.at("mock_default").get<std::string>();
  }
  if (j.contains("http")) {
    const json& h = j.at("http");
    c.http.base_url = h.value("base_url", c.http.base_url);
    c.http.model_name = h.value("model_name", c.http.model_name);
    c.http.temperature = h.value("temperature", c.http.temperature);
    c.http.timeout_ms = h.value("timeout_ms", c.http.timeout_ms);
    c.http.max_retries = h.value("max_retries", c.http.max_retries);
    c.http.max_inflight = h.value("max_inflight", c.http.max_inflight);
  }
  c.theta = j.value("theta", c.theta);
  c.cache_path = j.value("cache_path", c.cache_path);
  c.fallback_kind = j.value("fallback_kind", c.fallback_kind);
  c.lexicon_path = j.value("lexicon_path", c.lexicon_path);
  c.nli_endpoint = j.value("nli_endpoint", c.nli_endpoint);
  c.template_dir = j.value("template_dir", c.template_dir);
  c.workers = j.value("workers", c.workers);
  if (j.contains("strata")) {
    c.strata.strong_min = j.at("strata").value("strong_min",
                                               c.strata.strong_min);
    c.strata.moderate_min = j.at("strata").value("moderate_min",
                                                 c.strata.moderate_min);
  }
  c.baseline_year = j.value("baseline_year", c.baseline_year);
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ConfigError, "cannot read config '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigError,
                std::string("bad config JSON: ") + e.what());
  }
  return from_json(j);
}

PromptConfig RunConfig::prompt() const {
  return PromptConfig::parse_id(config_id);
}

OracleBackend RunConfig::make_backend() const {
  if (backend_kind == "mock") {
    MockFixture fixture;
    if (!relations_path.empty()) {
      fixture = fixture_from_relations(read_relations_jsonl(relations_path));
    }
    if (mock_default) fixture.default_response = *mock_default;
    return OracleBackend::mock(std::move(fixture));
  }
  if (backend_kind == "http") {
    if (http.base_url.empty()) {
      throw Error(ErrorCode::ConfigError,
                  "http backend needs a base_url (flag or ORACLE_URL)");
    }
    return OracleBackend::http(http);
  }
  throw Error(ErrorCode::ConfigError,
              "unknown backend kind '" + backend_kind + "'");
}

FallbackClassifier RunConfig::make_fallback() const {
  if (fallback_kind == "lexical") {
    return FallbackClassifier::lexical(
        lexicon_path.empty() ? builtin_lexicon() : load_lexicon(lexicon_path));
  }
  if (fallback_kind == "remote") {
    if (nli_endpoint.empty()) {
      throw Error(ErrorCode::ConfigError,
                  "remote fallback needs an nli_endpoint");
    }
    Lexicon backup;
    if (!lexicon_path.empty()) backup = load_lexicon(lexicon_path);
    return FallbackClassifier::remote(nli_endpoint, http.timeout_ms,
                                      std::move(backup));
  }
  if (fallback_kind == "none") return FallbackClassifier::none();
  throw Error(ErrorCode::ConfigError,
              "unknown fallback kind '" + fallback_kind + "'");
}

TemplateSet RunConfig::make_templates() const {
  return template_dir.empty() ? TemplateSet::builtin()
                              : TemplateSet::load_dir(template_dir);
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

void parallel_for(size_t count, int workers,
                  const std::function<void(size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto drain = [&] {
    for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      if (failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  const size_t n = std::min(static_cast<size_t>(workers), count);
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (size_t t = 0; t < n; ++t) threads.emplace_back(drain);
  for (std::thread& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::map<std::string, CorrectnessLabel> truth_map(const Corpus& corpus) {
  std::map<std::string, CorrectnessLabel> truth;
  for (const PatchRecord& rec : corpus.records()) {
    if (rec.label) truth[rec.patch_id] = *rec.label;
  }
  return truth;
}

// A run where every single comparison died on the backend is a backend
// outage, not a legitimate all-Unknown outcome.
void abort_if_backend_dead(
    const std::vector<std::pair<std::string, AssessmentResult>>& assessments) {
  size_t total = 0, unreachable = 0;
  for (const auto& [_, result] : assessments) {
    for (const PreliminaryVote& vote : result.votes) {
      ++total;
      if (vote.note.rfind("BackendUnreachable", 0) == 0) ++unreachable;
    }
  }
  if (total > 0 && unreachable == total) {
    throw Error(ErrorCode::BackendUnreachable,
                "every oracle query failed; aborting instead of emitting an "
                "all-Unknown report");
  }
}

AssessmentResult failed_assessment(const std::string& candidate_id) {
  AssessmentResult r;
  r.candidate_id = candidate_id;
  r.verdict = Verdict::Unknown;
  return r;
}

}  // namespace

json confusion_to_json(const ConfusionMatrix& m) {
  return {{"tp", m.tp},       {"fp", m.fp},
          {"tn", m.tn},       {"fn", m.fn},
          {"unknown", m.unknown}, {"covered", m.covered()},
          {"n", m.n()}};
}

json strata_to_json(const std::vector<EvidenceStratum>& strata) {
  json arr = json::array();
  for (const EvidenceStratum& s : strata) {
    arr.push_back({{"name", s.name},
                   {"count", s.members.size()},
                   {"members", s.members},
                   {"mean_informative", s.mean_informative},
                   {"mean_abstentions", s.mean_abstentions}});
  }
  return arr;
}

// ---------------------------------------------------------------------------
// LOTO

LotoReport run_loto(const Corpus& corpus, const RunConfig& config) {
  LotoReport report;
  report.config = config;

  const PromptConfig prompt = config.prompt();
  const OracleBackend backend = config.make_backend();
  const FallbackClassifier fallback = config.make_fallback();
  const TemplateSet templates = config.make_templates();
  ResponseCache cache = config.cache_path.empty()
                            ? ResponseCache()
                            : ResponseCache(config.cache_path);
  const std::map<std::string, CorrectnessLabel> truth = truth_map(corpus);

  for (const LotoFold& fold : loto_folds(corpus)) {
    // Leakage audit: no reference may share the held-out tool or be a
    // candidate of this fold.
    std::set<std::string> candidate_ids;
    for (const PatchRecord* c : fold.candidates) {
      candidate_ids.insert(c->patch_id);
    }
    for (const auto& [bug, refset] : fold.reference_index) {
      for (const auto& [ref, label] : refset.entries) {
        (void)label;
        if (ref->tool == fold.held_out_tool ||
            candidate_ids.count(ref->patch_id)) {
          throw Error(ErrorCode::ConfigError,
                      "evidence leakage in fold '" + fold.held_out_tool +
                          "': reference '" + ref->patch_id + "'");
        }
      }
    }

    std::vector<const PatchRecord*> cands;
    for (const PatchRecord* c : fold.candidates) {
      if (c->label) {
        cands.push_back(c);
      } else {
        report.warnings.push_back("fold '" + fold.held_out_tool +
                                  "': skipping unlabeled candidate '" +
                                  c->patch_id + "'");
      }
    }
    if (cands.empty()) {
      report.warnings.push_back("fold '" + fold.held_out_tool +
                                "' omitted: no labeled candidates");
      continue;
    }

    std::vector<AssessmentResult> results(cands.size());
    std::vector<std::string> failures(cands.size());
    parallel_for(cands.size(), config.workers, [&](size_t i) {
      try {
        results[i] =
            assess_candidate(*cands[i], fold.reference_index.at(cands[i]->bug),
                             prompt, backend, &cache, fallback, templates);
      } catch (const Error& e) {
        results[i] = failed_assessment(cands[i]->patch_id);
        failures[i] = "candidate '" + cands[i]->patch_id +
                      "' scored Unknown: " + e.what();
      } catch (const std::exception& e) {
        results[i] = failed_assessment(cands[i]->patch_id);
        failures[i] = "candidate '" + cands[i]->patch_id +
                      "' scored Unknown: " + e.what();
      }
    });
    for (const std::string& f : failures) {
      if (!f.empty()) report.warnings.push_back(f);
    }

    FoldReport fr;
    fr.tool = fold.held_out_tool;
    fr.n = static_cast<long long>(results.size());
    fr.confusion = confusion(results, truth);
    fr.coverage = coverage(fr.confusion);
    if (fr.confusion.covered() > 0) {
      fr.accuracy_covered = accuracy_covered(fr.confusion);
    } else {
      report.warnings.push_back("fold '" + fold.held_out_tool +
                                "': empty covered set, accuracy omitted");
    }
    report.folds.push_back(fr);

    for (AssessmentResult& r : results) {
      if (r.verdict == Verdict::Unknown) {
        report.residual_unknown.push_back(r.candidate_id);
      }
      report.assessments.emplace_back(fold.held_out_tool, std::move(r));
    }
  }

  std::sort(report.residual_unknown.begin(), report.residual_unknown.end());
  abort_if_backend_dead(report.assessments);

  double cov_weighted_num = 0, acc_weighted_num = 0;
  long long cov_weight = 0, acc_weight = 0;
  double cov_sum = 0, acc_sum = 0;
  long long acc_folds = 0;
  for (const FoldReport& fr : report.folds) {
    cov_weighted_num += fr.coverage * static_cast<double>(fr.n);
    cov_weight += fr.n;
    cov_sum += fr.coverage;
    if (fr.accuracy_covered) {
      acc_weighted_num += *fr.accuracy_covered * static_cast<double>(fr.n);
      acc_weight += fr.n;
      acc_sum += *fr.accuracy_covered;
      ++acc_folds;
    }
  }
  if (cov_weight > 0) {
    report.weighted_coverage = cov_weighted_num /
                               static_cast<double>(cov_weight);
    report.unweighted_coverage = cov_sum /
                                 static_cast<double>(report.folds.size());
  }
  if (acc_weight > 0) {
    report.weighted_accuracy = acc_weighted_num /
                               static_cast<double>(acc_weight);
    report.unweighted_accuracy = acc_sum / static_cast<double>(acc_folds);
  }
  return report;
}

json LotoReport::to_json() const {
  json folds_json = json::array();
  for (const FoldReport& fr : folds) {
    folds_json.push_back(
        {{"tool", fr.tool},
         {"n", fr.n},
         {"coverage", fr.coverage},
         {"accuracy_covered",
          fr.accuracy_covered ? json(*fr.accuracy_covered) : json(nullptr)},
         {"confusion", confusion_to_json(fr.confusion)}});
  }
  json j;
  j["config"] = config.to_json();
  j["folds"] = std::move(folds_json);
  j["aggregates"] = {
      {"weighted",
       {{"coverage", weighted_coverage},
        {"accuracy_covered",
         weighted_accuracy ? json(*weighted_accuracy) : json(nullptr)}}},
      {"unweighted",
       {{"coverage", unweighted_coverage},
        {"accuracy_covered",
         unweighted_accuracy ? json(*unweighted_accuracy) : json(nullptr)}}}};
  j["residual_unknown"] = residual_unknown;
  j["warnings"] = warnings;
  return j;
}

std::string LotoReport::to_csv() const {
  std::ostringstream out;
  out << "tool,n,coverage,accuracy_covered,tp,fp,tn,fn,unknown\n";
  for (const FoldReport& fr : folds) {
    out << fr.tool << "," << fr.n << "," << fmt_double(fr.coverage) << ","
        << (fr.accuracy_covered ? fmt_double(*fr.accuracy_covered) : "")
        << "," << fr.confusion.tp << "," << fr.confusion.fp << ","
        << fr.confusion.tn << "," << fr.confusion.fn << ","
        << fr.confusion.unknown << "\n";
  }
  return out.str();
}

void export_residual(const LotoReport& report, const Corpus& corpus,
                     const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + out_path + "'");
  }
  for (const std::string& id : report.residual_unknown) {
    const PatchRecord* rec = corpus.find(id);
    if (rec) out << patch_record_to_json_line(*rec) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Secondary merge

MergeReport merge_secondary(
    const std::vector<AssessmentResult>& primary,
    const std::map<std::string, Verdict>& secondary,
    const std::map<std::string, CorrectnessLabel>& truth) {
  std::vector<AssessmentResult> merged = primary;
  MergeReport report;
  for (AssessmentResult& r : merged) {
    if (r.verdict != Verdict::Unknown) continue;
    auto it = secondary.find(r.candidate_id);
    if (it == secondary.end() || it->second == Verdict::Unknown) continue;
    r.verdict = it->second;
    ++report.filled;
  }
  report.confusion = confusion(merged, truth);
  std::tie(report.accuracy, report.f1) = global_accuracy_f1(report.confusion);
  return report;
}

json MergeReport::to_json() const {
  return {{"confusion", confusion_to_json(confusion)},
          {"accuracy", accuracy},
          {"f1", f1},
          {"filled", filled}};
}

// ---------------------------------------------------------------------------
// Longitudinal redundancy

RedundancyRunReport run_redundancy(const Corpus& corpus, int baseline_year,
                                   double theta) {
  RedundancyRunReport report;
  report.baseline_year = baseline_year;
  report.theta = theta;

  const std::vector<TemporalSlice> slices =
      temporal_slices(corpus, baseline_year, &report.warnings);
  for (const TemporalSlice& slice : slices) {
    std::vector<const PatchRecord*> tool_patches;
    for (const PatchRecord* rec : corpus.for_tool(slice.tool)) {
      if (rec->year && *rec->year == slice.cutoff_year && rec->label) {
        tool_patches.push_back(rec);
      }
    }
    RedundancyReport slice_report =
        redundancy_report(slice, tool_patches, corpus, theta);
    for (const RedundancyRow& row : slice_report.rows) {
      report.total += row.total;
      report.redundant += row.redundant_count();
      report.baseline_only += row.baseline_only;
      report.added_only += row.added_only;
      report.both += row.both;
    }
    report.slices.push_back(std::move(slice_report));
  }
  return report;
}

json RedundancyRunReport::to_json() const {
  json slices_json = json::array();
  for (const RedundancyReport& slice : slices) {
    json rows = json::array();
    for (const RedundancyRow& row : slice.rows) {
      json redundant_patches = json::array();
      for (const RedundantPatch& p : row.redundant) {
        redundant_patches.push_back(
            {{"patch_id", p.patch_id},
             {"origin", redundancy_origin_str(p.origin)},
             {"stage", match_stage_str(p.strongest_stage)}});
      }
      rows.push_back({{"label", label_str(row.label)},
                      {"total", row.total},
                      {"redundant", row.redundant_count()},
                      {"baseline_only", row.baseline_only},
                      {"added_only", row.added_only},
                      {"both", row.both},
                      {"redundant_patches", std::move(redundant_patches)}});
    }
    slices_json.push_back({{"tool", slice.tool},
                           {"year", slice.cutoff_year},
                           {"rows", std::move(rows)}});
  }
  json j;
  j["baseline_year"] = baseline_year;
  j["theta"] = theta;
  j["slices"] = std::move(slices_json);
  j["overall"] = {{"total", total},
                  {"redundant", redundant},
                  {"rate", rate()},
                  {"baseline_only", baseline_only},
                  {"added_only", added_only},
                  {"both", both}};
  j["warnings"] = warnings;
  return j;
}

std::string RedundancyRunReport::to_csv() const {
  std::ostringstream out;
  out << "tool,year,label,total,redundant,baseline_only,added_only,both\n";
  for (const RedundancyReport& slice : slices) {
    for (const RedundancyRow& row : slice.rows) {
      out << slice.tool << "," << slice.cutoff_year << ","
          << label_str(row.label) << "," << row.total << ","
          << row.redundant_count() << "," << row.baseline_only << ","
          << row.added_only << "," << row.both << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Oracle replay

ReplayReport run_oracle_replay(const Corpus& corpus,
                               const std::vector<RelationRecord>& relations,
                               RelationshipTask task, const std::string& tool,
                               const StratumConfig& strata_config) {
  ReplayReport report;
  report.task = task;
  report.tool = tool;

  const OracleBackend backend = mock_from_relations(relations);
  const FallbackClassifier fallback = FallbackClassifier::builtin_lexical();
  PromptConfig prompt;
  switch (task) {
    case RelationshipTask::CC:
      prompt = PromptConfig::parse_id("scc-cc-diff");
      break;
    case RelationshipTask::SS:
      prompt = PromptConfig::parse_id("s-ss-diff");
      break;
    case RelationshipTask::SE:
      prompt = PromptConfig::parse_id("s-se-diff");
      break;
  }

  std::vector<const PatchRecord*> candidates;
  if (tool.empty()) {
    for (const PatchRecord& rec : corpus.records()) {
      if (rec.tool != kDeveloperTool) candidates.push_back(&rec);
    }
  } else {
    candidates = corpus.for_tool(tool);
  }

  std::vector<AssessmentResult> results;
  for (const PatchRecord* cand : candidates) {
    if (!cand->label) {
      report.warnings.push_back("skipping unlabeled candidate '" +
                                cand->patch_id + "'");
      continue;
    }
    ReferenceSet refset =
        build_reference_set(corpus, cand->bug, {cand->tool});
    AssessmentResult result;
    try {
      result = assess_candidate(*cand, refset, prompt, backend, nullptr,
                                fallback);
    } catch (const Error& e) {
      result = failed_assessment(cand->patch_id);
      report.warnings.push_back("candidate '" + cand->patch_id +
                                "' scored Unknown: " + e.what());
    }
    report.total_pairs += static_cast<long long>(result.votes.size());
    report.informative_correct += result.informative_correct;
    report.informative_overfitting += result.informative_overfitting;
    report.abstentions += result.abstentions;
    results.push_back(std::move(result));
  }

  const std::map<std::string, CorrectnessLabel> truth = truth_map(corpus);
  report.confusion = confusion(results, truth);
  report.coverage = coverage(report.confusion);
  if (report.confusion.covered() > 0) {
    report.accuracy_covered = accuracy_covered(report.confusion);
  }
  report.strata = evidence_strata(results, strata_config);
  report.assessments.reserve(results.size());
  for (AssessmentResult& r : results) {
    report.assessments.emplace_back(tool, std::move(r));
  }
  return report;
}

json ReplayReport::to_json() const {
  json j;
  j["task"] = task_str(task);
  j["tool"] = tool;
  j["confusion"] = confusion_to_json(confusion);
  j["coverage"] = coverage;
  j["accuracy_covered"] =
      accuracy_covered ? json(*accuracy_covered) : json(nullptr);
  j["strata"] = strata_to_json(strata);
  j["funnel"] = {{"total_pairs", total_pairs},
                 {"informative_correct", informative_correct},
                 {"informative_overfitting", informative_overfitting},
                 {"abstentions", abstentions}};
  j["warnings"] = warnings;
  return j;
}

// ---------------------------------------------------------------------------
// Plain assessment

std::vector<AssessmentResult> run_assess(const Corpus& corpus,
                                         const RunConfig& config,
                                         const std::string& candidate_id) {
  const PromptConfig prompt = config.prompt();
  const OracleBackend backend = config.make_backend();
  const FallbackClassifier fallback = config.make_fallback();
  const TemplateSet templates = config.make_templates();
  ResponseCache cache = config.cache_path.empty()
                            ? ResponseCache()
                            : ResponseCache(config.cache_path);

  std::vector<const PatchRecord*> candidates;
  if (candidate_id.empty()) {
    for (const PatchRecord& rec : corpus.records()) {
      if (rec.tool != kDeveloperTool) candidates.push_back(&rec);
    }
  } else {
    const PatchRecord* rec = corpus.find(candidate_id);
    if (!rec) {
      throw Error(ErrorCode::ConfigError,
                  "no patch '" + candidate_id + "' in the corpus");
    }
    candidates.push_back(rec);
  }

  std::vector<AssessmentResult> results(candidates.size());
  parallel_for(candidates.size(), config.workers, [&](size_t i) {
    const PatchRecord* cand = candidates[i];
    ReferenceSet refset = build_reference_set(corpus, cand->bug, {cand->tool});
    results[i] =
        assess_candidate(*cand, refset, prompt, backend, &cache, fallback,
                         templates);
  });

  std::vector<std::pair<std::string, AssessmentResult>> tagged;
  tagged.reserve(results.size());
  for (size_t i = 0; i < results.size(); ++i) {
    tagged.emplace_back(candidates[i]->tool, results[i]);
  }
  abort_if_backend_dead(tagged);
  return results;
}

// ---------------------------------------------------------------------------
// Assessment (de)serialization

json assessment_to_json(const AssessmentResult& result) {
  json votes = json::array();
  for (const PreliminaryVote& v : result.votes) {
    json vote;
    vote["reference"] = v.reference_id;
    vote["task"] = task_str(v.task);
    vote["relation"] = v.relation ? json(v.relation->value) : json(nullptr);
    vote["vote"] = verdict_str(v.vote);
    vote["stage"] = v.stage ? json(parse_stage_str(*v.stage)) : json(nullptr);
    if (!v.note.empty()) vote["note"] = v.note;
    votes.push_back(std::move(vote));
  }
  json j;
  j["candidate"] = result.candidate_id;
  j["verdict"] = verdict_str(result.verdict);
  j["votes"] = std::move(votes);
  j["counts"] = {{"correct", result.informative_correct},
                 {"overfitting", result.informative_overfitting},
                 {"abstentions", result.abstentions}};
  return j;
}

AssessmentResult assessment_from_json(const json& j) {
  AssessmentResult result;
  result.candidate_id = j.at("candidate").get<std::string>();
  result.verdict = parse_verdict_str(j.at("verdict").get<std::string>());
  for (const json& vote : j.value("votes", json::array())) {
    PreliminaryVote v;
    v.reference_id = vote.at("reference").get<std::string>();
    v.task = parse_task_str(vote.at("task").get<std::string>());
    if (vote.contains("relation") && !vote.at("relation").is_null()) {
      v.relation = RelationshipLabel{v.task,
                                     vote.at("relation").get<std::string>()};
    }
    v.vote = parse_verdict_str(vote.at("vote").get<std::string>());
    if (vote.contains("stage") && !vote.at("stage").is_null()) {
      v.stage = vote.at("stage").get<std::string>() == "keyword"
                    ? ParseStage::Keyword
                    : ParseStage::Fallback;
    }
    v.note = vote.value("note", std::string());
    result.votes.push_back(std::move(v));
  }
  if (j.contains("counts")) {
    result.informative_correct = j.at("counts").value("correct", 0);
    result.informative_overfitting = j.at("counts").value("overfitting", 0);
    result.abstentions = j.at("counts").value("abstentions", 0);
  }
  return result;
}

void write_assessments_jsonl(const std::vector<AssessmentResult>& results,
                             const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  }
  for (const AssessmentResult& r : results) {
    out << assessment_to_json(r).dump() << "\n";
  }
}

std::vector<AssessmentResult> read_assessments_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  }
  std::vector<AssessmentResult> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(assessment_from_json(json::parse(line)));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::IoError, "bad assessment at line " +
                                          std::to_string(lineno) + ": " +
                                          e.what());
    }
  }
  return out;
}

}  // namespace historian
