#include "historian/refset.hpp"

#include <algorithm>

namespace historian {

ReferenceSet build_reference_set(const Corpus& corpus, const BugId& bug,
                                 const std::set<std::string>& exclude_tools) {
  ReferenceSet set;
  set.bug = bug;
  for (const PatchRecord* rec : corpus.for_bug(bug)) {
    if (exclude_tools.count(rec->tool)) continue;
    if (rec->tool == kDeveloperTool) {
      // Developer fixes are trusted references even without a label.
      set.entries.emplace_back(rec,
                               rec->label.value_or(CorrectnessLabel::Correct));
    } else if (rec->label) {
      set.entries.emplace_back(rec, *rec->label);
    }
  }
  return set;
}

std::vector<LotoFold> loto_folds(const Corpus& corpus) {
  std::vector<std::string> tools;
  for (const std::string& tool : corpus.tools()) {
    if (tool != kDeveloperTool) tools.push_back(tool);
  }
  if (tools.size() < 2) {
    throw Error(ErrorCode::InsufficientTools,
                "leave-one-tool-out needs at least 2 non-developer tools, "
                "found " +
                    std::to_string(tools.size()));
  }

  std::vector<LotoFold> folds;
  folds.reserve(tools.size());
  for (const std::string& tool : tools) {
    LotoFold fold;
    fold.held_out_tool = tool;
    fold.candidates = corpus.for_tool(tool);
    for (const PatchRecord* cand : fold.candidates) {
      if (fold.reference_index.count(cand->bug)) continue;
      fold.reference_index.emplace(
          cand->bug, build_reference_set(corpus, cand->bug, {tool}));
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<TemporalSlice> temporal_slices(const Corpus& corpus,
                                           int baseline_year,
                                           std::vector<std::string>* warnings) {
  std::set<std::string> baseline;
  // Post-baseline evaluation groups: (year, tool) -> labeled patch ids.
  std::map<std::pair<int, std::string>, std::set<std::string>> groups;

  for (const PatchRecord& rec : corpus.records()) {
    if (!rec.year) {
      if (warnings) {
        warnings->push_back("skipping " + rec.patch_id +
                            ": no year metadata");
      }
      continue;
    }
    if (!rec.label) continue;
    if (*rec.year <= baseline_year) {
      baseline.insert(rec.patch_id);
    } else if (rec.tool != kDeveloperTool) {
      groups[{*rec.year, rec.tool}].insert(rec.patch_id);
    }
  }

  std::vector<TemporalSlice> slices;
  slices.reserve(groups.size());
  std::set<std::string> added;
  for (const auto& [key, ids] : groups) {
    TemporalSlice slice;
    slice.cutoff_year = key.first;
    slice.tool = key.second;
    slice.baseline = baseline;
    slice.added = added;
    slices.push_back(std::move(slice));
    added.insert(ids.begin(), ids.end());
  }
  return slices;
}

}  // namespace historian
