#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "historian/promptkit.hpp"

namespace historian {

struct RelationshipLabel {
  RelationshipTask task = RelationshipTask::CC;
  std::string value;

  bool operator==(const RelationshipLabel& other) const = default;
};

enum class ParseStage { Keyword, Fallback };

std::string parse_stage_str(ParseStage stage);

struct ParseOutcome {
  RelationshipLabel label;
  ParseStage stage = ParseStage::Keyword;
  // Stage Keyword: the single matched label. Stage Fallback: the
  // ambiguous keyword set that forced the fallback (possibly empty).
  std::vector<std::string> matched_keywords;
  std::optional<double> fallback_score;  // present iff stage == Fallback
};

struct LexiconEntry {
  std::string pattern;
  double weight = 1.0;
};

// Synonym lexicons for the offline fallback scorer:
// task name ("cc"/"ss"/"se") -> label -> weighted patterns.
struct Lexicon {
  std::map<std::string, std::map<std::string, std::vector<LexiconEntry>>>
      by_task;
};

Lexicon builtin_lexicon();
Lexicon load_lexicon(const std::string& path);
void write_lexicon(const Lexicon& lexicon, const std::string& path);

// Resolves ambiguous responses. Lexical scores with a synonym lexicon
// (deterministic, offline); RemoteNli posts to an entailment service and
// may carry a lexical backup; None refuses (FallbackUnavailable).
struct FallbackClassifier {
  enum class Kind { Lexical, RemoteNli, None };

  Kind kind = Kind::None;
  Lexicon lexicon;        // Lexical scorer, or backup for RemoteNli
  std::string endpoint;   // RemoteNli service URL
  int timeout_ms = 10000;

  static FallbackClassifier lexical(Lexicon lex);
  static FallbackClassifier builtin_lexical();
  static FallbackClassifier remote(const std::string& endpoint,
                                   int timeout_ms = 10000,
                                   Lexicon backup = {});
  static FallbackClassifier none();
};

// Case-insensitive, word-boundary scan for each label's canonical
// keyword forms ("type-1"/"type 1"/"type1", "not a clone"/"not-a-clone",
// "yes", "no"). Returns the set of labels with at least one hit.
std::set<std::string> extract_keywords(const std::string& response,
                                       const Vocabulary& vocab);

// Normalized per-label scores in [0,1] summing to 1. Lexical: sum of
// hit weights (all-zero falls back to uniform). RemoteNli: normalized
// service scores; transport errors raise FallbackUnavailable (or fall
// through to the lexical backup when one is carried).
std::map<std::string, double> fallback_scores(
    const std::string& response, const Vocabulary& vocab,
    const FallbackClassifier& fallback);

// Two-stage parse: unique keyword wins outright; otherwise the fallback
// argmax decides, ties resolved to the earliest vocabulary label.
ParseOutcome parse_label(const std::string& response, const Vocabulary& vocab,
                         const FallbackClassifier& fallback);

}  // namespace historian
