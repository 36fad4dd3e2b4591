#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "historian/inference.hpp"

namespace historian {

// Correct is the positive class; Unknown verdicts sit outside the
// covered set.
struct ConfusionMatrix {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;
  long long unknown = 0;

  long long covered() const { return tp + fp + tn + fn; }
  long long n() const { return covered() + unknown; }

  bool operator==(const ConfusionMatrix& other) const = default;
};

ConfusionMatrix confusion(const std::vector<AssessmentResult>& results,
                          const std::map<std::string, CorrectnessLabel>& truth);

// |C| / N. Throws EmptyEvaluation when n == 0.
double coverage(const ConfusionMatrix& m);

// (tp + tn) / |C|. Throws EmptyCoveredSet when the covered set is empty.
double accuracy_covered(const ConfusionMatrix& m);

// Global accuracy and F1 once every residual Unknown has been resolved;
// throws UnresolvedResiduals when unknown > 0. F1 is 0 when the
// positive class is empty on both sides.
std::pair<double, double> global_accuracy_f1(const ConfusionMatrix& m);

// Cohen's κ = (p_o − p_e) / (1 − p_e); 1.0 in the degenerate case
// p_e == 1. Throws LengthMismatch on unequal or empty inputs.
double cohen_kappa(const std::vector<std::string>& a,
                   const std::vector<std::string>& b);

struct StratumConfig {
  int strong_min = 10;   // Strong: informative votes ≥ strong_min
  int moderate_min = 2;  // Moderate: moderate_min ≤ votes < strong_min
};

struct EvidenceStratum {
  std::string name;  // Strong | Moderate | SinglePrecedent | NoEvidence
  std::vector<std::string> members;  // candidate ids, sorted
  double mean_informative = 0;
  double mean_abstentions = 0;
};

// Buckets results by informative-vote count into the four strata
// (always all four, possibly empty), order Strong → NoEvidence.
std::vector<EvidenceStratum> evidence_strata(
    const std::vector<AssessmentResult>& results,
    const StratumConfig& config = {});

}  // namespace historian
