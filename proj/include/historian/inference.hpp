#pragma once

#include <optional>
#include <string>
#include <vector>

#include "historian/labelparse.hpp"
#include "historian/oracle.hpp"
#include "historian/refset.hpp"

namespace historian {

enum class Verdict { Correct, Overfitting, Unknown };

std::string verdict_str(Verdict v);
Verdict parse_verdict_str(const std::string& s);
Verdict verdict_of(CorrectnessLabel label);

// One pairwise comparison against a reference patch. `relation` and
// `stage` are absent when the comparison failed (backend or parse
// trouble); such votes are Unknown with the reason in `note`.
struct PreliminaryVote {
  std::string reference_id;
  RelationshipTask task = RelationshipTask::CC;
  std::optional<RelationshipLabel> relation;
  Verdict vote = Verdict::Unknown;
  std::optional<ParseStage> stage;
  std::string note;
};

struct AssessmentResult {
  std::string candidate_id;
  Verdict verdict = Verdict::Unknown;
  std::vector<PreliminaryVote> votes;
  int informative_correct = 0;
  int informative_overfitting = 0;
  int abstentions = 0;
};

// The evidence translation table. Equivalence signals (yes, Type-1/2/4)
// inherit the reference label; divergence signals (no, Not-a-Clone)
// mean Overfitting against a Correct reference but carry no evidence
// against an Overfitting one; Type-3 is always inconclusive.
Verdict pairwise_infer(const RelationshipLabel& relation,
                       CorrectnessLabel ref_label);

// Unknown votes are discarded as abstentions; no informative votes or a
// tie yields Unknown, otherwise the majority label wins.
Verdict majority_vote(const std::vector<PreliminaryVote>& votes);

// Exhaustive pairwise assessment of one candidate against a reference
// set: render, query, parse, infer per reference, then majority vote.
// Per-reference failures degrade to abstentions; a candidate missing
// the representation the config needs throws MissingRepresentation.
AssessmentResult assess_candidate(
    const PatchRecord& candidate, const ReferenceSet& refset,
    const PromptConfig& config, const OracleBackend& backend,
    ResponseCache* cache, const FallbackClassifier& fallback,
    const TemplateSet& templates = TemplateSet::builtin());

}  // namespace historian
