#include "historian/harness.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include "doctest.h"
#include "json.hpp"
#include "testutil.hpp"

using historian::AssessmentResult;
using historian::CorrectnessLabel;
using historian::Corpus;
using historian::Error;
using historian::ErrorCode;
using historian::LotoReport;
using historian::PatchRecord;
using historian::RelationRecord;
using historian::RelationshipTask;
using historian::RunConfig;
using historian::Verdict;
using historian::run_loto;
using nlohmann::json;
using testutil::make_patch;

namespace {

int code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return -1;
}

std::string write_relations(const testutil::TempDir& dir,
                            const std::vector<RelationRecord>& relations,
                            const std::string& name = "relations.jsonl") {
  const std::string path = dir.file(name);
  historian::write_relations_jsonl(relations, path);
  return path;
}

RunConfig mock_config(const std::string& relations_path) {
  RunConfig cfg;
  cfg.config_id = "scc-cc-diff";
  cfg.backend_kind = "mock";
  cfg.relations_path = relations_path;
  cfg.fallback_kind = "lexical";
  cfg.workers = 4;
  return cfg;
}

}  // namespace

TEST_CASE("run configs round-trip as JSON and files") {
  RunConfig cfg;
  cfg.config_id = "r-se-method";
  cfg.backend_kind = "http";
  cfg.relations_path = "rel.jsonl";
  cfg.mock_default = "yes";
  cfg.http.base_url = "http://127.0.0.1:9999/complete";
  cfg.http.model_name = "oracle-7b";
  cfg.http.temperature = 0.3;
  cfg.http.timeout_ms = 1234;
  cfg.http.max_retries = 5;
  cfg.http.max_inflight = 2;
  cfg.theta = 0.9;
  cfg.cache_path = "cache.jsonl";
  cfg.fallback_kind = "remote";
  cfg.lexicon_path = "lex.json";
  cfg.nli_endpoint = "http://127.0.0.1:9998/nli";
  cfg.template_dir = "tpl";
  cfg.workers = 7;
  cfg.strata.strong_min = 12;
  cfg.strata.moderate_min = 3;
  cfg.baseline_year = 2019;

  json j = cfg.to_json();
  CHECK(RunConfig::from_json(j).to_json() == j);

  // Partial JSON keeps defaults for everything absent.
  RunConfig sparse = RunConfig::from_json(json::parse(R"({"theta":0.5})"));
  CHECK(sparse.theta == 0.5);
  CHECK(sparse.config_id == "scc-cc-diff");
  CHECK(sparse.backend_kind == "mock");
  CHECK(sparse.workers == 4);

  testutil::TempDir dir;
  const std::string path = dir.file("config.json");
  std::ofstream(path) << j.dump(2);
  CHECK(RunConfig::from_file(path).to_json() == j);

  CHECK(code_of([] { (void)RunConfig::from_file("/nonexistent/c.json"); }) ==
        static_cast<int>(ErrorCode::ConfigError));
  const std::string broken = dir.file("broken.json");
  std::ofstream(broken) << "{ nope";
  CHECK(code_of([&] { (void)RunConfig::from_file(broken); }) ==
        static_cast<int>(ErrorCode::ConfigError));
}

TEST_CASE("config factories validate their inputs") {
  const int config_error = static_cast<int>(ErrorCode::ConfigError);

  RunConfig cfg;
  CHECK(cfg.prompt().id() == "scc-cc-diff");
  cfg.config_id = "bogus";
  CHECK(code_of([&] { (void)cfg.prompt(); }) ==
        static_cast<int>(ErrorCode::UnknownConfig));
  cfg.config_id = "scc-cc-diff";

  // Mock with neither relations nor default still builds (it just
  // misses on every query).
  CHECK(cfg.make_backend().is_mock());

  cfg.backend_kind = "http";
  CHECK(code_of([&] { (void)cfg.make_backend(); }) == config_error);
  cfg.http.base_url = "http://127.0.0.1:9/x";
  CHECK_FALSE(cfg.make_backend().is_mock());
  cfg.backend_kind = "carrier-pigeon";
  CHECK(code_of([&] { (void)cfg.make_backend(); }) == config_error);
  cfg.backend_kind = "mock";

  CHECK(cfg.make_fallback().kind ==
        historian::FallbackClassifier::Kind::Lexical);
  cfg.fallback_kind = "none";
  CHECK(cfg.make_fallback().kind == historian::FallbackClassifier::Kind::None);
  cfg.fallback_kind = "remote";
  CHECK(code_of([&] { (void)cfg.make_fallback(); }) == config_error);
  cfg.nli_endpoint = "http://127.0.0.1:9/nli";
  CHECK(cfg.make_fallback().kind ==
        historian::FallbackClassifier::Kind::RemoteNli);
  cfg.fallback_kind = "astrology";
  CHECK(code_of([&] { (void)cfg.make_fallback(); }) == config_error);
  cfg.fallback_kind = "lexical";

  CHECK(cfg.make_templates().by_entry ==
        historian::TemplateSet::builtin().by_entry);
  cfg.template_dir = "/nonexistent/templates";
  CHECK(code_of([&] { (void)cfg.make_templates(); }) ==
        static_cast<int>(ErrorCode::BadTemplate));
}

TEST_CASE("leave-one-tool-out replay is deterministic and leak-free") {
  std::vector<PatchRecord> records =
      testutil::synthetic_records(4, {"alpha", "beta", "gamma"});
  std::vector<RelationRecord> relations =
      testutil::consistent_relations(records, RelationshipTask::CC);
  Corpus corpus(records);

  testutil::TempDir dir;
  RunConfig cfg = mock_config(write_relations(dir, relations));

  LotoReport first = run_loto(corpus, cfg);
  LotoReport second = run_loto(corpus, cfg);
  CHECK(first.to_json().dump() == second.to_json().dump());

  // Parallelism must not leak into the observable report.
  RunConfig serial = cfg;
  serial.workers = 1;
  json parallel_body = first.to_json();
  json serial_body = run_loto(corpus, serial).to_json();
  parallel_body.erase("config");
  serial_body.erase("config");
  CHECK(parallel_body.dump() == serial_body.dump());

  // Three folds, one per tool, every candidate covered and correct
  // because the evidence is consistent with the ground truth.
  REQUIRE(first.folds.size() == 3);
  CHECK(first.folds[0].tool == "alpha");
  CHECK(first.folds[1].tool == "beta");
  CHECK(first.folds[2].tool == "gamma");
  long long total_candidates = 0;
  for (const auto& fold : first.folds) {
    CHECK(fold.n == 4);
    CHECK(fold.coverage == 1.0);
    REQUIRE(fold.accuracy_covered.has_value());
    CHECK(*fold.accuracy_covered == 1.0);
    CHECK(fold.confusion.fp + fold.confusion.fn == 0);
    total_candidates += fold.n;
  }
  CHECK(total_candidates == 12);
  CHECK(first.weighted_coverage == 1.0);
  CHECK(first.unweighted_coverage == 1.0);
  CHECK(first.residual_unknown.empty());
  CHECK(first.warnings.empty());

  // Candidate conservation: each non-developer patch assessed exactly
  // once, in the fold holding out its own tool.
  std::set<std::string> seen;
  for (const auto& [tool, result] : first.assessments) {
    CHECK(seen.insert(result.candidate_id).second);
    const PatchRecord* rec = corpus.find(result.candidate_id);
    REQUIRE(rec != nullptr);
    CHECK(rec->tool == tool);
    // Leakage audit from the outside: no vote may cite a reference
    // written by the held-out tool.
    for (const auto& vote : result.votes) {
      const PatchRecord* ref = corpus.find(vote.reference_id);
      REQUIRE(ref != nullptr);
      CHECK(ref->tool != tool);
    }
  }
  CHECK(seen.size() == 12);

  const std::string csv = first.to_csv();
  CHECK(csv.rfind("tool,n,coverage,accuracy_covered,tp,fp,tn,fn,unknown\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

namespace {

// Uneven corpus: alpha patches all four bugs, beta and gamma only the
// first two. Gamma's evidence is withheld and one alpha candidate gets
// deliberately inverted evidence.
struct UnevenFixture {
  std::vector<PatchRecord> records;
  std::vector<RelationRecord> relations;

  UnevenFixture() {
    records = testutil::synthetic_records(4, {"alpha", "beta", "gamma"});
    records.erase(std::remove_if(records.begin(), records.end(),
                                 [](const PatchRecord& rec) {
                                   return (rec.tool == "beta" ||
                                           rec.tool == "gamma") &&
                                          (rec.bug.number == 102 ||
                                           rec.bug.number == 103);
                                 }),
                  records.end());
    relations = testutil::consistent_relations(records, RelationshipTask::CC);
    std::vector<RelationRecord> kept;
    for (RelationRecord rel : relations) {
      if (rel.candidate.rfind("gamma-", 0) == 0) continue;  // no evidence
      if (rel.candidate == "alpha-proj-100") {              // inverted
        rel.label = rel.label == "Not-a-Clone" ? "Type-1" : "Not-a-Clone";
      }
      kept.push_back(std::move(rel));
    }
    relations = std::move(kept);
  }
};

}  // namespace

TEST_CASE("aggregates weight folds by their candidate counts") {
  UnevenFixture fixture;
  Corpus corpus(fixture.records);
  testutil::TempDir dir;
  RunConfig cfg = mock_config(write_relations(dir, fixture.relations));

  LotoReport report = run_loto(corpus, cfg);
  REQUIRE(report.folds.size() == 3);
  CHECK(report.folds[0].n == 4);  // alpha
  CHECK(report.folds[1].n == 2);  // beta
  CHECK(report.folds[2].n == 2);  // gamma

  // Gamma candidates got no answers: covered set empty, accuracy
  // omitted with a warning, and both candidates land in the residual.
  const auto& gamma = report.folds[2];
  CHECK(gamma.coverage == 0.0);
  CHECK_FALSE(gamma.accuracy_covered.has_value());
  CHECK(report.residual_unknown ==
        std::vector<std::string>{"gamma-proj-100", "gamma-proj-101"});
  bool warned = false;
  for (const std::string& w : report.warnings) {
    if (w.find("gamma") != std::string::npos &&
        w.find("empty covered set") != std::string::npos) {
      warned = true;
    }
  }
  CHECK(warned);

  // The inverted candidate stays covered but sides with the wrong
  // class, so alpha's fold accuracy drops below one.
  const auto& alpha = report.folds[0];
  CHECK(alpha.coverage == 1.0);
  REQUIRE(alpha.accuracy_covered.has_value());
  CHECK(*alpha.accuracy_covered == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(alpha.confusion.fp + alpha.confusion.fn == 1);

  // Recompute every aggregate from the per-fold data.
  double cov_num = 0, cov_sum = 0, acc_num = 0, acc_sum = 0;
  long long cov_den = 0, acc_den = 0, acc_folds = 0;
  for (const auto& fold : report.folds) {
    cov_num += fold.coverage * static_cast<double>(fold.n);
    cov_den += fold.n;
    cov_sum += fold.coverage;
    if (fold.accuracy_covered) {
      acc_num += *fold.accuracy_covered * static_cast<double>(fold.n);
      acc_den += fold.n;
      acc_sum += *fold.accuracy_covered;
      ++acc_folds;
    }
  }
  CHECK(report.weighted_coverage ==
        doctest::Approx(cov_num / static_cast<double>(cov_den))
            .epsilon(1e-12));
  CHECK(report.unweighted_coverage ==
        doctest::Approx(cov_sum / 3.0).epsilon(1e-12));
  REQUIRE(report.weighted_accuracy.has_value());
  REQUIRE(report.unweighted_accuracy.has_value());
  CHECK(*report.weighted_accuracy ==
        doctest::Approx(acc_num / static_cast<double>(acc_den))
            .epsilon(1e-12));
  CHECK(*report.unweighted_accuracy ==
        doctest::Approx(acc_sum / static_cast<double>(acc_folds))
            .epsilon(1e-12));
  // With these numbers the two means genuinely differ.
  CHECK(report.weighted_coverage == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(*report.weighted_accuracy ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(*report.unweighted_accuracy ==
        doctest::Approx(0.875).epsilon(1e-12));

  // The gamma fold shows up in CSV with an empty accuracy cell.
  CHECK(report.to_csv().find("gamma,2,0,,0,0,0,0,2\n") != std::string::npos);
}

TEST_CASE("residual exports round-trip as corpus records") {
  UnevenFixture fixture;
  Corpus corpus(fixture.records);
  testutil::TempDir dir;
  RunConfig cfg = mock_config(write_relations(dir, fixture.relations));
  LotoReport report = run_loto(corpus, cfg);
  REQUIRE(report.residual_unknown.size() == 2);

  const std::string out = dir.file("residual.jsonl");
  historian::export_residual(report, corpus, out);
  Corpus residual = historian::read_corpus_jsonl(out);
  REQUIRE(residual.records().size() == 2);
  for (const PatchRecord& rec : residual.records()) {
    const PatchRecord* original = corpus.find(rec.patch_id);
    REQUIRE(original != nullptr);
    CHECK(rec.tool == "gamma");
    CHECK(rec.diff_text == original->diff_text);
    CHECK(rec.method_after == original->method_after);
    CHECK(rec.label == original->label);
    CHECK(rec.year == original->year);
  }
}

TEST_CASE("assessments round-trip through JSONL files") {
  UnevenFixture fixture;
  Corpus corpus(fixture.records);
  testutil::TempDir dir;
  RunConfig cfg = mock_config(write_relations(dir, fixture.relations));
  LotoReport report = run_loto(corpus, cfg);

  std::vector<AssessmentResult> flat;
  for (const auto& [tool, result] : report.assessments) {
    flat.push_back(result);
  }
  REQUIRE(flat.size() == 8);

  const std::string path = dir.file("assessments.jsonl");
  historian::write_assessments_jsonl(flat, path);
  std::vector<AssessmentResult> loaded =
      historian::read_assessments_jsonl(path);
  REQUIRE(loaded.size() == flat.size());
  for (size_t i = 0; i < flat.size(); ++i) {
    CHECK(loaded[i].candidate_id == flat[i].candidate_id);
    CHECK(loaded[i].verdict == flat[i].verdict);
    CHECK(loaded[i].informative_correct == flat[i].informative_correct);
    CHECK(loaded[i].informative_overfitting ==
          flat[i].informative_overfitting);
    CHECK(loaded[i].abstentions == flat[i].abstentions);
    REQUIRE(loaded[i].votes.size() == flat[i].votes.size());
    for (size_t v = 0; v < flat[i].votes.size(); ++v) {
      CHECK(loaded[i].votes[v].reference_id == flat[i].votes[v].reference_id);
      CHECK(loaded[i].votes[v].task == flat[i].votes[v].task);
      CHECK(loaded[i].votes[v].relation == flat[i].votes[v].relation);
      CHECK(loaded[i].votes[v].vote == flat[i].votes[v].vote);
      CHECK(loaded[i].votes[v].stage == flat[i].votes[v].stage);
      CHECK(loaded[i].votes[v].note == flat[i].votes[v].note);
    }
  }

  // The gamma rows carry miss notes and no relation or stage.
  bool saw_miss = false;
  for (const AssessmentResult& r : loaded) {
    if (r.candidate_id.rfind("gamma-", 0) != 0) continue;
    for (const auto& vote : r.votes) {
      CHECK_FALSE(vote.relation.has_value());
      CHECK_FALSE(vote.stage.has_value());
      CHECK(vote.note.rfind("MockMiss", 0) == 0);
      saw_miss = true;
    }
  }
  CHECK(saw_miss);

  CHECK(code_of([] {
          (void)historian::read_assessments_jsonl("/nonexistent/a.jsonl");
        }) == static_cast<int>(ErrorCode::IoError));
  const std::string corrupt = dir.file("corrupt.jsonl");
  std::ofstream(corrupt) << historian::assessment_to_json(flat[0]).dump()
                         << "\n{ broken\n";
  try {
    (void)historian::read_assessments_jsonl(corrupt);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("secondary verdicts fill residual unknowns") {
  auto result = [](std::string id, Verdict v) {
    AssessmentResult r;
    r.candidate_id = std::move(id);
    r.verdict = v;
    return r;
  };
  std::vector<AssessmentResult> primary = {
      result("a", Verdict::Correct),
      result("b", Verdict::Unknown),
      result("c", Verdict::Unknown),
      result("d", Verdict::Overfitting),
  };
  std::map<std::string, CorrectnessLabel> truth = {
      {"a", CorrectnessLabel::Correct},
      {"b", CorrectnessLabel::Overfitting},
      {"c", CorrectnessLabel::Overfitting},
      {"d", CorrectnessLabel::Correct},
  };
  std::map<std::string, Verdict> secondary = {
      {"b", Verdict::Correct},
      {"c", Verdict::Overfitting},
      {"a", Verdict::Overfitting},  // ignored: primary already decided
  };

  historian::MergeReport merged =
      historian::merge_secondary(primary, secondary, truth);
  CHECK(merged.filled == 2);
  CHECK(merged.confusion.tp == 1);  // a
  CHECK(merged.confusion.fp == 1);  // b filled wrong
  CHECK(merged.confusion.tn == 1);  // c filled right
  CHECK(merged.confusion.fn == 1);  // d wrong on its own
  CHECK(merged.accuracy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(merged.f1 == doctest::Approx(0.5).epsilon(1e-12));

  // A residual the secondary cannot resolve fails the merge, and a
  // secondary Unknown is not a resolution.
  const int unresolved = static_cast<int>(ErrorCode::UnresolvedResiduals);
  secondary.erase("c");
  CHECK(code_of([&] {
          (void)historian::merge_secondary(primary, secondary, truth);
        }) == unresolved);
  secondary["c"] = Verdict::Unknown;
  CHECK(code_of([&] {
          (void)historian::merge_secondary(primary, secondary, truth);
        }) == unresolved);
}

TEST_CASE("redundancy replay walks a planted timeline") {
  std::vector<PatchRecord> records = {
      // Baseline era: one developer fix per bug.
      make_patch("dev-1", "proj-101", "developer", "int a = b + c;",
                 CorrectnessLabel::Correct, 2015),
      make_patch("dev-2", "proj-102", "developer", "while (x) { y(z); }",
                 CorrectnessLabel::Correct, 2015),
      make_patch("dev-3", "proj-103", "developer", "if (u) throw e;",
                 CorrectnessLabel::Correct, 2015),
      make_patch("dev-4", "proj-104", "developer",
                 "for (i = 0; i < 9; i++) s += i;",
                 CorrectnessLabel::Correct, 2015),
      make_patch("dev-5", "proj-105", "developer", "int[] arr = new int[7];",
                 CorrectnessLabel::Correct, 2015),
      // First post-baseline group (2021).
      make_patch("p11", "proj-101", "tool1", "int p = q + r;",
                 CorrectnessLabel::Correct, 2021),  // rename of dev-1
      make_patch("p12", "proj-102", "tool1", "return m.n(o, 3);",
                 CorrectnessLabel::Correct, 2021),  // novel
      make_patch("p13", "proj-103", "tool1", "if (w) throw f;",
                 CorrectnessLabel::Overfitting, 2021),  // clone, wrong label
      make_patch("p15", "proj-105", "tool1",
                 "synchronized (lock) { count--; }",
                 CorrectnessLabel::Correct, 2021),  // novel
      make_patch("p-unlabeled", "proj-105", "tool1",
                 "int a = b + c;", std::nullopt, 2021),  // ignored
      // Second group (2022).
      make_patch("p21", "proj-101", "tool2", "int a  =  b  +  c ;",
                 CorrectnessLabel::Correct, 2022),  // dev-1 exact + p11
      make_patch("p22", "proj-102", "tool2", "return n.m(3, o);",
                 CorrectnessLabel::Correct, 2022),  // token clone of p12
      make_patch("p24", "proj-104", "tool2",
                 "for (i = 0; i < 9; i++) s += i;",
                 CorrectnessLabel::Correct, 2022),  // dev-4 exact
  };
  Corpus corpus(records);

  historian::RedundancyRunReport report =
      historian::run_redundancy(corpus, 2020, 1.0);
  CHECK(report.baseline_year == 2020);
  REQUIRE(report.slices.size() == 2);

  // 2021/tool1: only baseline history exists, so AddedOnly and Both are
  // impossible for the first evaluated group.
  const historian::RedundancyReport& first = report.slices[0];
  CHECK(first.tool == "tool1");
  CHECK(first.cutoff_year == 2021);
  REQUIRE(first.rows.size() == 2);
  CHECK(first.rows[0].label == CorrectnessLabel::Correct);
  CHECK(first.rows[0].total == 3);
  REQUIRE(first.rows[0].redundant.size() == 1);
  CHECK(first.rows[0].redundant[0].patch_id == "p11");
  CHECK(first.rows[0].redundant[0].origin ==
        historian::RedundancyOrigin::BaselineOnly);
  CHECK(first.rows[0].redundant[0].strongest_stage ==
        historian::MatchStage::Structural);
  CHECK(first.rows[0].added_only == 0);
  CHECK(first.rows[0].both == 0);
  // The mislabeled clone earns nothing: matching is same-label only.
  CHECK(first.rows[1].label == CorrectnessLabel::Overfitting);
  CHECK(first.rows[1].total == 1);
  CHECK(first.rows[1].redundant.empty());

  // 2022/tool2: all three patches rediscover recorded solutions.
  const historian::RedundancyReport& second = report.slices[1];
  CHECK(second.tool == "tool2");
  REQUIRE(second.rows.size() == 1);
  const historian::RedundancyRow& row = second.rows[0];
  CHECK(row.total == 3);
  REQUIRE(row.redundant.size() == 3);
  auto find_patch = [&](const std::string& id) {
    for (const auto& p : row.redundant) {
      if (p.patch_id == id) return p;
    }
    FAIL(("missing redundant patch " + id));
    return row.redundant[0];
  };
  CHECK(find_patch("p21").origin == historian::RedundancyOrigin::Both);
  CHECK(find_patch("p21").strongest_stage == historian::MatchStage::Exact);
  CHECK(find_patch("p22").origin == historian::RedundancyOrigin::AddedOnly);
  CHECK(find_patch("p22").strongest_stage == historian::MatchStage::Token);
  CHECK(find_patch("p24").origin ==
        historian::RedundancyOrigin::BaselineOnly);
  CHECK(find_patch("p24").strongest_stage == historian::MatchStage::Exact);

  CHECK(report.total == 7);
  CHECK(report.redundant == 4);
  CHECK(report.baseline_only == 2);
  CHECK(report.added_only == 1);
  CHECK(report.both == 1);
  CHECK(report.rate() == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

  const std::string csv = report.to_csv();
  CHECK(csv.rfind("tool,year,label,total,redundant,baseline_only,added_only,"
                  "both\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
  CHECK(csv.find("tool2,2022,correct,3,3,1,1,1\n") != std::string::npos);
}

TEST_CASE("oracle replay reproduces expert-annotated verdicts") {
  std::vector<PatchRecord> records =
      testutil::synthetic_records(3, {"alpha", "beta"});
  Corpus corpus(records);
  std::vector<RelationRecord> relations =
      testutil::consistent_relations(records, RelationshipTask::CC);

  historian::ReplayReport report = historian::run_oracle_replay(
      corpus, relations, RelationshipTask::CC, "");
  CHECK(report.coverage == 1.0);
  REQUIRE(report.accuracy_covered.has_value());
  CHECK(*report.accuracy_covered == 1.0);
  CHECK(report.confusion.n() == 6);  // three bugs, two tools

  // Funnel bookkeeping: every pair lands in exactly one bucket, and
  // each of the six candidates faced two references.
  CHECK(report.total_pairs == 12);
  CHECK(report.informative_correct + report.informative_overfitting +
            report.abstentions ==
        report.total_pairs);
  CHECK(report.strata.size() == 4);
  CHECK(report.assessments.size() == 6);
  for (const auto& [tag, result] : report.assessments) {
    CHECK(tag == "");  // tagged with the requested filter, here "all"
    CHECK(corpus.find(result.candidate_id)->tool != historian::kDeveloperTool);
  }

  // Restricting to one tool halves the candidate set.
  historian::ReplayReport alpha_only = historian::run_oracle_replay(
      corpus, relations, RelationshipTask::CC, "alpha");
  CHECK(alpha_only.tool == "alpha");
  CHECK(alpha_only.confusion.n() == 3);
  REQUIRE(alpha_only.assessments.size() == 3);
  CHECK(alpha_only.assessments[0].first == "alpha");

  // The binary tasks drive the same pipeline through their own prompts.
  std::vector<RelationRecord> ss_relations =
      testutil::consistent_relations(records, RelationshipTask::SS);
  historian::ReplayReport ss_report = historian::run_oracle_replay(
      corpus, ss_relations, RelationshipTask::SS, "");
  CHECK(ss_report.coverage == 1.0);
  CHECK(*ss_report.accuracy_covered == 1.0);

  // Unlabeled candidates are skipped with a warning.
  std::vector<PatchRecord> with_unlabeled = records;
  with_unlabeled.push_back(
      make_patch("alpha-extra", "proj-100", "alpha", "int zz = 1;"));
  historian::ReplayReport skipped = historian::run_oracle_replay(
      Corpus(with_unlabeled), relations, RelationshipTask::CC, "");
  CHECK(skipped.confusion.n() == 6);
  REQUIRE(skipped.warnings.size() == 1);
  CHECK(skipped.warnings[0].find("alpha-extra") != std::string::npos);
}

TEST_CASE("plain assessment runs one candidate or every tool patch") {
  std::vector<PatchRecord> records =
      testutil::synthetic_records(3, {"alpha", "beta"});
  Corpus corpus(records);
  testutil::TempDir dir;
  RunConfig cfg = mock_config(write_relations(
      dir, testutil::consistent_relations(records, RelationshipTask::CC)));
  cfg.workers = 2;

  std::vector<AssessmentResult> one =
      historian::run_assess(corpus, cfg, "alpha-proj-100");
  REQUIRE(one.size() == 1);
  CHECK(one[0].candidate_id == "alpha-proj-100");
  CHECK(one[0].verdict ==
        historian::verdict_of(*corpus.find("alpha-proj-100")->label));

  std::vector<AssessmentResult> all = historian::run_assess(corpus, cfg, "");
  CHECK(all.size() == 6);
  for (const AssessmentResult& r : all) {
    CHECK(r.verdict == historian::verdict_of(*corpus.find(r.candidate_id)->label));
  }

  CHECK(code_of([&] { (void)historian::run_assess(corpus, cfg, "ghost"); }) ==
        static_cast<int>(ErrorCode::ConfigError));
}

TEST_CASE("worker threads surface failures instead of dying") {
  // Several candidates, one of which cannot take a method prompt. The
  // error must come back as an exception even with a thread pool.
  std::vector<PatchRecord> records =
      testutil::synthetic_records(3, {"alpha", "beta"});
  for (PatchRecord& rec : records) {
    if (rec.patch_id == "beta-proj-101") rec.method_after.reset();
  }
  Corpus corpus(records);

  testutil::TempDir dir;
  RunConfig cfg = mock_config(write_relations(
      dir, testutil::consistent_relations(records, RelationshipTask::CC)));
  cfg.config_id = "scc-cc-method";
  cfg.workers = 4;

  CHECK(code_of([&] { (void)historian::run_assess(corpus, cfg, ""); }) ==
        static_cast<int>(ErrorCode::MissingRepresentation));
}

TEST_CASE("a dead backend aborts the run rather than reporting silence") {
  std::vector<PatchRecord> records = {
      make_patch("dev-1", "proj-101", "developer", "int a = 1;",
                 CorrectnessLabel::Correct, 2015),
      make_patch("ref-1", "proj-101", "toolA", "int a = 2;",
                 CorrectnessLabel::Correct, 2019),
      make_patch("cand-1", "proj-101", "toolB", "int a = 3;",
                 CorrectnessLabel::Overfitting, 2021),
  };
  Corpus corpus(records);

  RunConfig cfg;
  cfg.config_id = "s-ss-diff";
  cfg.backend_kind = "http";
  cfg.http.base_url = "http://127.0.0.1:1/complete";  // unroutable
  cfg.http.timeout_ms = 200;
  cfg.http.max_retries = 0;
  cfg.workers = 1;

  CHECK(code_of([&] {
          (void)historian::run_assess(corpus, cfg, "cand-1");
        }) == static_cast<int>(ErrorCode::BackendUnreachable));
}
