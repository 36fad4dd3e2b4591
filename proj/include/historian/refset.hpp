#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "historian/corpus.hpp"

namespace historian {

// Tool name reserved for human-written fixes. Developer patches are
// reference material only: they join every reference set (implicitly
// labeled Correct) and are never held out as a fold of their own.
inline constexpr const char* kDeveloperTool = "developer";

// Per-bug historical evidence: every labeled patch for the bug whose
// tool survived the exclusion filter, sorted by patch_id.
struct ReferenceSet {
  BugId bug;
  std::vector<std::pair<const PatchRecord*, CorrectnessLabel>> entries;
};

// One leave-one-tool-out fold: the held-out tool's patches become
// candidates, and every reference set is rebuilt without that tool.
struct LotoFold {
  std::string held_out_tool;
  std::vector<const PatchRecord*> candidates;
  std::map<BugId, ReferenceSet> reference_index;
};

// One step of the chronological replay: everything recorded by
// `cutoff_year`'s evaluation of `tool`. `baseline` holds labeled patches
// from the baseline year or earlier; `added` holds labeled patches of
// post-baseline groups evaluated before this one.
struct TemporalSlice {
  int cutoff_year = 0;
  std::string tool;
  std::set<std::string> baseline;
  std::set<std::string> added;
};

ReferenceSet build_reference_set(const Corpus& corpus, const BugId& bug,
                                 const std::set<std::string>& exclude_tools);

// One fold per distinct non-developer tool. Throws InsufficientTools
// when the corpus has fewer than two such tools.
std::vector<LotoFold> loto_folds(const Corpus& corpus);

// Slices ordered by (year, tool name); records without year metadata are
// skipped with a note in `warnings` when given.
std::vector<TemporalSlice> temporal_slices(
    const Corpus& corpus, int baseline_year,
    std::vector<std::string>* warnings = nullptr);

}  // namespace historian
