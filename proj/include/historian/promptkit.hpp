#pragma once

#include <map>
#include <string>
#include <vector>

#include "historian/corpus.hpp"

namespace historian {

enum class RelationshipTask { CC, SS, SE };

enum class PromptStrategy {
  Simple,
  Reasoning,
  LineSimilarity,
  SimpleCodeClone,
  Integrated,
};

enum class Representation { Diff, Method };

std::string task_str(RelationshipTask task);
RelationshipTask parse_task_str(const std::string& s);
std::string strategy_str(PromptStrategy s);
std::string representation_str(Representation r);

// The closed answer set a task's responses are parsed against.
struct Vocabulary {
  RelationshipTask task = RelationshipTask::CC;
  std::vector<std::string> labels;
};

// CC → {Type-1, Type-2, Type-3, Type-4, Not-a-Clone}; SS/SE → {yes, no}.
const Vocabulary& vocabulary_for(RelationshipTask task);

// One way of asking the question: a strategy, the relationship it
// probes, and which code representation it shows.
struct PromptConfig {
  PromptStrategy strategy = PromptStrategy::Simple;
  RelationshipTask task = RelationshipTask::SS;
  Representation representation = Representation::Diff;

  // "<strategy-abbrev>-<task>-<representation>", e.g. "scc-cc-diff".
  std::string id() const;
  static PromptConfig parse_id(const std::string& id);

  bool operator==(const PromptConfig& other) const = default;
};

// All 16 valid configurations (binary strategies on SS and SE, clone
// strategies on CC, each in both representations), deterministic order.
std::vector<PromptConfig> catalog();

struct RenderedPrompt {
  PromptConfig config;
  std::string text;
  std::string candidate_id;
  std::string reference_id;
};

// Prompt wording, keyed by catalog entry name ("simple_ss", ...,
// "integrated_cc"). Placeholders: {{LEFT}} candidate payload, {{RIGHT}}
// reference payload, {{KIND}} the word "diff" or "method".
struct TemplateSet {
  std::map<std::string, std::string> by_entry;

  static const TemplateSet& builtin();
  // Reads "<entry>.txt" per catalog entry from a directory; missing or
  // placeholder-less files raise BadTemplate.
  static TemplateSet load_dir(const std::string& dir);
};

std::string template_entry_name(PromptStrategy strategy,
                                RelationshipTask task);

// Substitutes the candidate (LEFT) and reference (RIGHT) payloads into
// the entry's template. Throws MissingRepresentation when a required
// payload is absent and UnknownConfig for invalid strategy/task pairs.
RenderedPrompt render(const PromptConfig& config, const PatchRecord& candidate,
                      const PatchRecord& reference,
                      const TemplateSet& templates = TemplateSet::builtin());

// Stable SHA-256 hex digest over (config id, candidate_id, reference_id,
// text). Cache key for oracle responses.
std::string prompt_fingerprint(const RenderedPrompt& prompt);

// SHA-256 of an arbitrary byte string, lowercase hex.
std::string sha256_hex(const std::string& data);

}  // namespace historian
