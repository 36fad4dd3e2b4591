#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "historian/errors.hpp"

namespace historian {

/// Benchmark bug identity, rendered as "Project-Number" (e.g. "Chart-24").
struct BugId {
  std::string project;
  int number = 0;

  static BugId parse(const std::string& rendered);
  std::string str() const;

  bool operator==(const BugId& o) const {
    return number == o.number && project == o.project;
  }
  bool operator<(const BugId& o) const {
    return project != o.project ? project < o.project : number < o.number;
  }
};

enum class CorrectnessLabel { Correct, Overfitting };

std::string label_str(CorrectnessLabel label);
CorrectnessLabel parse_label_str(const std::string& s);

/// One tool-generated or developer patch. `tool` is "developer" for the
/// human fix. `method_after` is the full modified-method source once the
/// extraction stage has run.
struct PatchRecord {
  std::string patch_id;
  BugId bug;
  std::string tool;
  std::string diff_text;
  std::optional<std::string> method_after;
  std::optional<CorrectnessLabel> label;
  std::optional<int> year;
  std::string source;
};

enum class LineTag { Context, Add, Del };

struct HunkLine {
  LineTag tag;
  std::string text;

  bool operator==(const HunkLine&) const = default;
};

struct Hunk {
  int old_start = 0;
  int old_len = 0;
  int new_start = 0;
  int new_len = 0;
  std::vector<HunkLine> lines;

  bool operator==(const Hunk&) const = default;
};

struct UnifiedDiff {
  std::string old_path;
  std::string new_path;
  std::vector<Hunk> hunks;

  bool operator==(const UnifiedDiff&) const = default;
};

enum class ValidationStatus {
  Ok,
  MalformedHeader,
  ContextMisaligned,
  ApplyFailed,
  MultiMethod,
};

std::string validation_status_str(ValidationStatus s);

struct ValidationReport {
  std::string patch_id;
  ValidationStatus status = ValidationStatus::Ok;
  std::string detail;
};

/// Parses a unified diff. Header line counts are recomputed from the hunk
/// bodies and verified; an omitted count defaults to 1.
/// Throws Error{MalformedHeader} or Error{CountMismatch}.
UnifiedDiff parse_unified_diff(const std::string& text);

/// Renders a structured diff back to text. parse(render(d)) == d for every
/// structurally valid d.
std::string render_unified_diff(const UnifiedDiff& diff);

/// Applies `diff` to the pre-patch file content. Context and deletion
/// lines must match the source at their declared positions; with
/// `ignore_whitespace` the comparison collapses blank/tab runs and strips
/// trailing whitespace. Throws Error{ContextMisaligned} on any mismatch.
std::string apply_patch(const UnifiedDiff& diff, const std::string& source,
                        bool ignore_whitespace = false);

/// Inclusive 1-based line range, `first <= last`.
struct LineRange {
  int first = 0;
  int last = 0;
};

/// Line ranges of the patched file touched by the diff: added lines, plus
/// the insertion point of pure deletions.
std::vector<LineRange> changed_line_ranges(const UnifiedDiff& diff);

/// Returns the smallest brace-delimited method block that encloses every
/// changed range: signature line before the first changed line, closing
/// brace after the last. Braces inside strings, chars and comments are
/// skipped. Throws Error{MultiMethod} when the ranges resolve to two
/// disjoint method bodies, Error{NoEnclosingMethod} when no method block
/// encloses a range.
std::string extract_modified_method(const std::string& patched_source,
                                    const std::vector<LineRange>& ranges);

struct DedupReport {
  // (removed patch_id, surviving patch_id)
  std::vector<std::pair<std::string, std::string>> removed;
};

/// Collapses patches with identical canonicalized method text within each
/// (tool, bug) group, keeping the lexicographically smallest patch_id.
std::vector<PatchRecord> dedup_corpus(const std::vector<PatchRecord>& records,
                                      DedupReport* report = nullptr);

/// Immutable patch collection. Records are held sorted by patch_id.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<PatchRecord> records);

  const std::vector<PatchRecord>& records() const { return records_; }
  const PatchRecord* find(const std::string& patch_id) const;
  std::vector<const PatchRecord*> for_bug(const BugId& bug) const;
  std::vector<const PatchRecord*> for_tool(const std::string& tool) const;
  /// Distinct tool names, sorted, "developer" included when present.
  std::vector<std::string> tools() const;
  std::vector<BugId> bugs() const;
  size_t size() const { return records_.size(); }

 private:
  std::vector<PatchRecord> records_;
  std::map<std::string, size_t> by_id_;
  std::map<BugId, std::vector<size_t>> by_bug_;
  std::map<std::string, std::vector<size_t>> by_tool_;
};

struct IngestResult {
  Corpus corpus;
  std::vector<ValidationReport> rejected;
  DedupReport dedup;
};

/// Runs the full pipeline over a manifest: parse -> validate -> apply ->
/// extract -> dedup. Per-patch failures are reported, never abort the run.
/// Throws Error{ManifestUnreadable} when the manifest itself cannot be
/// read or parsed.
IngestResult ingest(const std::string& manifest_path,
                    bool ignore_whitespace = false);

// Corpus JSONL I/O (one JSON object per line, UTF-8, LF-terminated).
void write_corpus_jsonl(const Corpus& corpus, const std::string& path);
Corpus read_corpus_jsonl(const std::string& path);

PatchRecord patch_record_from_json_line(const std::string& line);
std::string patch_record_to_json_line(const PatchRecord& record);

}  // namespace historian
