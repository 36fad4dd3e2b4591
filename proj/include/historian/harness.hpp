#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "historian/clonedet.hpp"
#include "historian/inference.hpp"
#include "historian/metrics.hpp"
#include "json.hpp"

namespace historian {

// Everything a run needs, serializable so every report can embed the
// exact configuration that produced it.
struct RunConfig {
  std::string config_id = "scc-cc-diff";
  std::string backend_kind = "mock";  // "mock" | "http"
  std::string relations_path;         // mock: expert relation fixture
  std::optional<std::string> mock_default;
  HttpBackendConfig http;
  double theta = 1.0;
  std::string cache_path;
  std::string fallback_kind = "lexical";  // "lexical" | "remote" | "none"
  std::string lexicon_path;               // optional lexicon override
  std::string nli_endpoint;
  std::string template_dir;  // optional template override directory
  int workers = 4;
  StratumConfig strata;
  int baseline_year = 2020;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);

  PromptConfig prompt() const;
  OracleBackend make_backend() const;
  FallbackClassifier make_fallback() const;
  TemplateSet make_templates() const;
};

struct FoldReport {
  std::string tool;
  long long n = 0;  // assessed candidates
  ConfusionMatrix confusion;
  double coverage = 0;
  std::optional<double> accuracy_covered;  // absent when nothing covered
};

struct LotoReport {
  RunConfig config;
  std::vector<FoldReport> folds;
  double weighted_coverage = 0;
  std::optional<double> weighted_accuracy;
  double unweighted_coverage = 0;
  std::optional<double> unweighted_accuracy;
  std::vector<std::string> residual_unknown;  // candidate ids, sorted
  std::vector<std::string> warnings;
  // Every assessment, tagged with its fold's tool, in fold order.
  std::vector<std::pair<std::string, AssessmentResult>> assessments;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Leave-one-tool-out evaluation with a leakage audit per fold. Weights
// in the weighted aggregate are fold candidate counts.
LotoReport run_loto(const Corpus& corpus, const RunConfig& config);

// Residual Unknown candidates as corpus-format JSONL for downstream
// predictive tools.
void export_residual(const LotoReport& report, const Corpus& corpus,
                     const std::string& out_path);

struct MergeReport {
  ConfusionMatrix confusion;
  double accuracy = 0;
  double f1 = 0;
  long long filled = 0;  // residuals resolved by the secondary source

  nlohmann::json to_json() const;
};

// Fills Unknown verdicts from secondary tool verdicts, then computes
// the global metrics. Throws UnresolvedResiduals if any Unknown
// survives the merge.
MergeReport merge_secondary(const std::vector<AssessmentResult>& primary,
                            const std::map<std::string, Verdict>& secondary,
                            const std::map<std::string, CorrectnessLabel>&
                                truth);

struct RedundancyRunReport {
  int baseline_year = 0;
  double theta = 1.0;
  std::vector<RedundancyReport> slices;
  long long total = 0;
  long long redundant = 0;
  long long baseline_only = 0;
  long long added_only = 0;
  long long both = 0;
  std::vector<std::string> warnings;

  double rate() const {
    return total == 0 ? 0.0
                      : static_cast<double>(redundant) /
                            static_cast<double>(total);
  }
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Chronological replay: per (year, tool) slice, how many labeled
// patches merely rediscover recorded same-label solutions.
RedundancyRunReport run_redundancy(const Corpus& corpus, int baseline_year,
                                   double theta);

struct ReplayReport {
  RelationshipTask task = RelationshipTask::CC;
  std::string tool;  // empty = all non-developer tools
  ConfusionMatrix confusion;
  double coverage = 0;
  std::optional<double> accuracy_covered;
  std::vector<EvidenceStratum> strata;
  long long total_pairs = 0;
  long long informative_correct = 0;
  long long informative_overfitting = 0;
  long long abstentions = 0;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, AssessmentResult>> assessments;

  nlohmann::json to_json() const;
};

// Oracle replay: assessment driven purely by expert-annotated
// relationship labels through a mock backend, each candidate judged
// against references from every other tool.
ReplayReport run_oracle_replay(const Corpus& corpus,
                               const std::vector<RelationRecord>& relations,
                               RelationshipTask task, const std::string& tool,
                               const StratumConfig& strata = {});

// Plain assessment of one candidate (or every non-developer patch when
// `candidate_id` is empty) against reference sets excluding each
// candidate's own tool.
std::vector<AssessmentResult> run_assess(const Corpus& corpus,
                                         const RunConfig& config,
                                         const std::string& candidate_id);

nlohmann::json assessment_to_json(const AssessmentResult& result);
AssessmentResult assessment_from_json(const nlohmann::json& j);
void write_assessments_jsonl(const std::vector<AssessmentResult>& results,
                             const std::string& path);
std::vector<AssessmentResult> read_assessments_jsonl(const std::string& path);

nlohmann::json confusion_to_json(const ConfusionMatrix& m);
nlohmann::json strata_to_json(const std::vector<EvidenceStratum>& strata);

}  // namespace historian
