#include "historian/inference.hpp"

#include <algorithm>

namespace historian {

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Correct: return "correct";
    case Verdict::Overfitting: return "overfitting";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

Verdict parse_verdict_str(const std::string& s) {
  if (s == "correct") return Verdict::Correct;
  if (s == "overfitting") return Verdict::Overfitting;
  if (s == "unknown") return Verdict::Unknown;
  throw Error(ErrorCode::ConfigError, "bad verdict '" + s + "'");
}

Verdict verdict_of(CorrectnessLabel label) {
  return label == CorrectnessLabel::Correct ? Verdict::Correct
                                            : Verdict::Overfitting;
}

Verdict pairwise_infer(const RelationshipLabel& relation,
                       CorrectnessLabel ref_label) {
  const Vocabulary& vocab = vocabulary_for(relation.task);
  if (std::find(vocab.labels.begin(), vocab.labels.end(), relation.value) ==
      vocab.labels.end()) {
    throw Error(ErrorCode::InvalidLabel,
                "relation '" + relation.value + "' is not in the " +
                    task_str(relation.task) + " vocabulary");
  }

  if (relation.task == RelationshipTask::CC) {
    if (relation.value == "Type-1" || relation.value == "Type-2" ||
        relation.value == "Type-4") {
      return verdict_of(ref_label);
    }
    if (relation.value == "Type-3") return Verdict::Unknown;
    // Not-a-Clone
    return ref_label == CorrectnessLabel::Correct ? Verdict::Overfitting
                                                  : Verdict::Unknown;
  }
  // Binary tasks (SS, SE).
  if (relation.value == "yes") return verdict_of(ref_label);
  return ref_label == CorrectnessLabel::Correct ? Verdict::Overfitting
                                                : Verdict::Unknown;
}

Verdict majority_vote(const std::vector<PreliminaryVote>& votes) {
  int correct = 0, overfitting = 0;
  for (const PreliminaryVote& v : votes) {
    if (v.vote == Verdict::Correct) ++correct;
    else if (v.vote == Verdict::Overfitting) ++overfitting;
  }
  if (correct == overfitting) return Verdict::Unknown;  // covers 0-0 and ties
  return correct > overfitting ? Verdict::Correct : Verdict::Overfitting;
}

AssessmentResult assess_candidate(const PatchRecord& candidate,
                                  const ReferenceSet& refset,
                                  const PromptConfig& config,
                                  const OracleBackend& backend,
                                  ResponseCache* cache,
                                  const FallbackClassifier& fallback,
                                  const TemplateSet& templates) {
  if (config.representation == Representation::Method &&
      !candidate.method_after) {
    throw Error(ErrorCode::MissingRepresentation,
                "candidate '" + candidate.patch_id + "' has no method text");
  }

  AssessmentResult result;
  result.candidate_id = candidate.patch_id;

  for (const auto& [ref, ref_label] : refset.entries) {
    PreliminaryVote vote;
    vote.reference_id = ref->patch_id;
    vote.task = config.task;
    vote.vote = Verdict::Unknown;
    try {
      RenderedPrompt prompt = render(config, candidate, *ref, templates);
      OracleResponse response = query(backend, prompt, cache);
      ParseOutcome parsed =
          parse_label(response.raw_text, vocabulary_for(config.task), fallback);
      vote.relation = parsed.label;
      vote.stage = parsed.stage;
      vote.vote = pairwise_infer(parsed.label, ref_label);
    } catch (const Error& e) {
      // A failed comparison abstains rather than poisoning the verdict.
      vote.note = e.what();
    }
    result.votes.push_back(std::move(vote));
  }

  for (const PreliminaryVote& v : result.votes) {
    if (v.vote == Verdict::Correct) ++result.informative_correct;
    else if (v.vote == Verdict::Overfitting) ++result.informative_overfitting;
    else ++result.abstentions;
  }
  result.verdict = majority_vote(result.votes);
  return result;
}

}  // namespace historian
