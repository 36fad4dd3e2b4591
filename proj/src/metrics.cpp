#include "historian/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace historian {

ConfusionMatrix confusion(
    const std::vector<AssessmentResult>& results,
    const std::map<std::string, CorrectnessLabel>& truth) {
  ConfusionMatrix m;
  for (const AssessmentResult& r : results) {
    if (r.verdict == Verdict::Unknown) {
      ++m.unknown;
      continue;
    }
    auto it = truth.find(r.candidate_id);
    if (it == truth.end()) {
      throw Error(ErrorCode::MissingTruth,
                  "no ground-truth label for '" + r.candidate_id + "'");
    }
    const bool truly_correct = it->second == CorrectnessLabel::Correct;
    if (r.verdict == Verdict::Correct) {
      truly_correct ? ++m.tp : ++m.fp;
    } else {
      truly_correct ? ++m.fn : ++m.tn;
    }
  }
  return m;
}

double coverage(const ConfusionMatrix& m) {
  if (m.n() == 0) {
    throw Error(ErrorCode::EmptyEvaluation, "no results to cover");
  }
  return static_cast<double>(m.covered()) / static_cast<double>(m.n());
}

double accuracy_covered(const ConfusionMatrix& m) {
  if (m.covered() == 0) {
    throw Error(ErrorCode::EmptyCoveredSet,
                "accuracy undefined on an empty covered set");
  }
  return static_cast<double>(m.tp + m.tn) / static_cast<double>(m.covered());
}

std::pair<double, double> global_accuracy_f1(const ConfusionMatrix& m) {
  if (m.unknown > 0) {
    throw Error(ErrorCode::UnresolvedResiduals,
                std::to_string(m.unknown) +
                    " residual Unknown verdicts remain unresolved");
  }
  if (m.n() == 0) {
    throw Error(ErrorCode::EmptyEvaluation, "no results to score");
  }
  const double accuracy =
      static_cast<double>(m.tp + m.tn) / static_cast<double>(m.n());
  const long long f1_denom = 2 * m.tp + m.fp + m.fn;
  const double f1 =
      f1_denom == 0 ? 0.0
                    : 2.0 * static_cast<double>(m.tp) /
                          static_cast<double>(f1_denom);
  return {accuracy, f1};
}

double cohen_kappa(const std::vector<std::string>& a,
                   const std::vector<std::string>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::LengthMismatch,
                "rating vectors must be equal-length and non-empty (" +
                    std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  const double n = static_cast<double>(a.size());
  std::map<std::string, long long> count_a, count_b;
  long long agree = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ++count_a[a[i]];
    ++count_b[b[i]];
    if (a[i] == b[i]) ++agree;
  }
  const double p_o = static_cast<double>(agree) / n;
  double p_e = 0;
  for (const auto& [label, ca] : count_a) {
    auto it = count_b.find(label);
    if (it == count_b.end()) continue;
    p_e += (static_cast<double>(ca) / n) *
           (static_cast<double>(it->second) / n);
  }
  if (p_e >= 1.0) return 1.0;  // both raters constant on one label
  return (p_o - p_e) / (1.0 - p_e);
}

std::vector<EvidenceStratum> evidence_strata(
    const std::vector<AssessmentResult>& results, const StratumConfig& config) {
  if (config.moderate_min < 2 || config.strong_min <= config.moderate_min) {
    throw Error(ErrorCode::ConfigError,
                "stratum thresholds must satisfy 2 <= moderate_min < "
                "strong_min");
  }

  std::vector<EvidenceStratum> strata(4);
  strata[0].name = "Strong";
  strata[1].name = "Moderate";
  strata[2].name = "SinglePrecedent";
  strata[3].name = "NoEvidence";
  std::vector<double> informative_sum(4, 0), abstention_sum(4, 0);

  for (const AssessmentResult& r : results) {
    const int informative = r.informative_correct + r.informative_overfitting;
    size_t bucket;
    if (informative >= config.strong_min) bucket = 0;
    else if (informative >= config.moderate_min) bucket = 1;
    else if (informative == 1) bucket = 2;
    else bucket = 3;
    strata[bucket].members.push_back(r.candidate_id);
    informative_sum[bucket] += informative;
    abstention_sum[bucket] += r.abstentions;
  }

  for (size_t i = 0; i < strata.size(); ++i) {
    std::sort(strata[i].members.begin(), strata[i].members.end());
    const double count = static_cast<double>(strata[i].members.size());
    if (count > 0) {
      strata[i].mean_informative = informative_sum[i] / count;
      strata[i].mean_abstentions = abstention_sum[i] / count;
    }
  }
  return strata;
}

}  // namespace historian
