#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "historian/corpus.hpp"
#include "historian/lexer.hpp"
#include "historian/refset.hpp"

namespace historian {

// Which stage of the cascade declared two patches equivalent.
enum class MatchStage { Exact, Token, Structural, None };

std::string match_stage_str(MatchStage stage);

// Canonical form for exact matching: the code's token texts joined by
// single spaces. This erases comments and all formatting while keeping
// literals byte-exact, so canonical equality implies token-bag equality.
std::string normalize_exact(const std::string& method_text);

// Lexes code into identifier/keyword/literal/punctuation tokens.
// Comments and whitespace are dropped; string and char literals stay
// single tokens. Unterminated literals are reported via `warnings` and
// scanning resumes on the next line.
std::vector<Token> tokenize(const std::string& code,
                            std::vector<std::string>* warnings = nullptr);

// Replaces identifier texts with ID and literal texts with LIT;
// keywords and punctuation pass through. Idempotent.
std::vector<Token> abstract_tokens(std::vector<Token> tokens);

// Multiset of token texts.
using TokenBag = std::map<std::string, int>;

TokenBag token_bag(const std::vector<Token>& tokens);

// |a ∩ b| / max(|a|, |b|) over multisets. Throws EmptyBag when either
// bag is empty.
double overlap_similarity(const TokenBag& a, const TokenBag& b);

// Exact (canonical texts equal), else Token (bag similarity ≥ theta),
// else Structural (abstracted token sequences equal), else None.
// Requires method_after on both records; empty token streams surface as
// EmptyBag from the token stage.
MatchStage cascade_match(const PatchRecord& a, const PatchRecord& b,
                         double theta = 1.0);

struct ClusterEdge {
  std::string a, b;  // patch ids, a < b
  MatchStage stage = MatchStage::None;
  bool manual = false;
};

struct ClusterSet {
  // Each cluster sorted by patch_id; clusters sorted by first member.
  std::vector<std::vector<std::string>> clusters;
  // All matched pairs (strongest stage first found by the cascade) plus
  // manual override merges, sorted by (a, b).
  std::vector<ClusterEdge> edges;
};

// Union-find over all pairwise cascade matches, then manual override
// merges. Patches must share a bug unless `global_mode`. Throws
// OverridePairUnknown for overrides naming absent patch ids.
ClusterSet cluster(const std::vector<PatchRecord>& patches, double theta,
                   const std::vector<std::pair<std::string, std::string>>&
                       overrides = {},
                   bool global_mode = false);

enum class RedundancyOrigin { BaselineOnly, AddedOnly, Both };

std::string redundancy_origin_str(RedundancyOrigin origin);

struct RedundantPatch {
  std::string patch_id;
  RedundancyOrigin origin = RedundancyOrigin::BaselineOnly;
  MatchStage strongest_stage = MatchStage::None;
};

struct RedundancyRow {
  CorrectnessLabel label = CorrectnessLabel::Correct;
  int total = 0;
  int baseline_only = 0;
  int added_only = 0;
  int both = 0;
  std::vector<RedundantPatch> redundant;

  int redundant_count() const { return baseline_only + added_only + both; }
};

struct RedundancyReport {
  std::string tool;
  int cutoff_year = 0;
  std::vector<RedundancyRow> rows;  // one per label present, Correct first
};

// For each labeled candidate, searches same-bug historical patches with
// the SAME label across slice.baseline and slice.added; a candidate is
// redundant iff any cascade_match ≠ None, with origin decided by where
// the matches were found.
RedundancyReport redundancy_report(
    const TemporalSlice& slice,
    const std::vector<const PatchRecord*>& tool_patches, const Corpus& corpus,
    double theta = 1.0);

}  // namespace historian
