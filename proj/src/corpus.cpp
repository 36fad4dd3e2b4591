#include "historian/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "historian/clonedet.hpp"
#include "historian/lexer.hpp"
#include "json.hpp"

namespace historian {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// BugId / labels

BugId BugId::parse(const std::string& rendered) {
  auto dash = rendered.rfind('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == rendered.size()) {
    throw Error(ErrorCode::ConfigError, "bad bug id '" + rendered + "'");
  }
  BugId bug;
  bug.project = rendered.substr(0, dash);
  try {
    bug.number = std::stoi(rendered.substr(dash + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "bad bug number in '" + rendered + "'");
  }
  if (bug.number <= 0) {
    throw Error(ErrorCode::ConfigError, "bug number must be positive: '" +
                                            rendered + "'");
  }
  return bug;
}

std::string BugId::str() const {
  return project + "-" + std::to_string(number);
}

std::string label_str(CorrectnessLabel label) {
  return label == CorrectnessLabel::Correct ? "correct" : "overfitting";
}

CorrectnessLabel parse_label_str(const std::string& s) {
  if (s == "correct") return CorrectnessLabel::Correct;
  if (s == "overfitting") return CorrectnessLabel::Overfitting;
  throw Error(ErrorCode::ConfigError, "bad correctness label '" + s + "'");
}

std::string validation_status_str(ValidationStatus s) {
  switch (s) {
    case ValidationStatus::Ok: return "Ok";
    case ValidationStatus::MalformedHeader: return "MalformedHeader";
    case ValidationStatus::ContextMisaligned: return "ContextMisaligned";
    case ValidationStatus::ApplyFailed: return "ApplyFailed";
    case ValidationStatus::MultiMethod: return "MultiMethod";
  }
  return "Ok";
}

// ---------------------------------------------------------------------------
// Unified diff parsing

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

const std::regex kHunkHeaderRe(
    R"(^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@.*$)");

bool looks_like_file_header(const std::string& line) {
  return line.rfind("--- ", 0) == 0 || line.rfind("+++ ", 0) == 0 ||
         line.rfind("diff ", 0) == 0 || line.rfind("index ", 0) == 0 ||
         line.rfind("new file", 0) == 0 || line.rfind("deleted file", 0) == 0 ||
         line.rfind("similarity", 0) == 0 || line.rfind("rename ", 0) == 0 ||
         line.rfind("old mode", 0) == 0 || line.rfind("new mode", 0) == 0 ||
         line.rfind("Index:", 0) == 0 || line.rfind("====", 0) == 0;
}

std::string strip_path_header(const std::string& line, const char* prefix) {
  std::string path = line.substr(std::string(prefix).size());
  // Drop a trailing timestamp column if present ("\t2019-...").
  auto tab = path.find('\t');
  if (tab != std::string::npos) path = path.substr(0, tab);
  return path;
}

}  // namespace

UnifiedDiff parse_unified_diff(const std::string& text) {
  if (text.empty()) {
    throw Error(ErrorCode::MalformedHeader, "empty diff text");
  }
  const std::vector<std::string> lines = split_lines(text);
  UnifiedDiff diff;
  size_t i = 0;

  // Preamble: file headers and git noise before the first hunk.
  while (i < lines.size() && !lines[i].empty() && lines[i][0] != '@') {
    const std::string& line = lines[i];
    if (line.rfind("--- ", 0) == 0) {
      diff.old_path = strip_path_header(line, "--- ");
    } else if (line.rfind("+++ ", 0) == 0) {
      diff.new_path = strip_path_header(line, "+++ ");
    } else if (!looks_like_file_header(line)) {
      throw Error(ErrorCode::MalformedHeader,
                  "unexpected preamble line: '" + line + "'");
    }
    ++i;
  }
  while (i < lines.size() && lines[i].empty()) ++i;

  while (i < lines.size()) {
    std::smatch m;
    if (!std::regex_match(lines[i], m, kHunkHeaderRe)) {
      throw Error(ErrorCode::MalformedHeader,
                  "cannot parse hunk header: '" + lines[i] + "'");
    }
    Hunk hunk;
    hunk.old_start = std::stoi(m[1].str());
    hunk.old_len = m[2].matched ? std::stoi(m[2].str()) : 1;
    hunk.new_start = std::stoi(m[3].str());
    hunk.new_len = m[4].matched ? std::stoi(m[4].str()) : 1;
    ++i;

    int old_seen = 0;
    int new_seen = 0;
    while (old_seen < hunk.old_len || new_seen < hunk.new_len) {
      if (i >= lines.size()) {
        throw Error(ErrorCode::CountMismatch,
                    "hunk body ends before declared counts are met (have " +
                        std::to_string(old_seen) + "/" +
                        std::to_string(hunk.old_len) + " old, " +
                        std::to_string(new_seen) + "/" +
                        std::to_string(hunk.new_len) + " new)");
      }
      const std::string& line = lines[i];
      if (line.empty()) {
        hunk.lines.push_back({LineTag::Context, ""});
        ++old_seen;
        ++new_seen;
      } else if (line[0] == ' ') {
        hunk.lines.push_back({LineTag::Context, line.substr(1)});
        ++old_seen;
        ++new_seen;
      } else if (line[0] == '+') {
        hunk.lines.push_back({LineTag::Add, line.substr(1)});
        ++new_seen;
      } else if (line[0] == '-') {
        hunk.lines.push_back({LineTag::Del, line.substr(1)});
        ++old_seen;
      } else if (line[0] == '\\') {
        // "\ No newline at end of file"
      } else {
        throw Error(ErrorCode::CountMismatch,
                    "hunk body interrupted by non-diff line: '" + line + "'");
      }
      ++i;
      if (old_seen > hunk.old_len || new_seen > hunk.new_len) {
        throw Error(ErrorCode::CountMismatch,
                    "hunk body exceeds declared counts");
      }
    }
    // A no-newline marker may trail the last body line.
    if (i < lines.size() && !lines[i].empty() && lines[i][0] == '\\') ++i;

    diff.hunks.push_back(std::move(hunk));

    while (i < lines.size() && lines[i].empty()) ++i;
    if (i < lines.size() && lines[i][0] != '@') {
      if (lines[i][0] == ' ' || lines[i][0] == '+' || lines[i][0] == '-') {
        throw Error(ErrorCode::CountMismatch,
                    "hunk body exceeds declared counts near: '" + lines[i] +
                        "'");
      }
      throw Error(ErrorCode::MalformedHeader,
                  "unexpected line after hunk: '" + lines[i] + "'");
    }
  }

  if (diff.hunks.empty()) {
    throw Error(ErrorCode::MalformedHeader, "diff contains no hunks");
  }
  return diff;
}

std::string render_unified_diff(const UnifiedDiff& diff) {
  std::ostringstream out;
  if (!diff.old_path.empty() || !diff.new_path.empty()) {
    out << "--- " << diff.old_path << "\n+++ " << diff.new_path << "\n";
  }
  for (const Hunk& hunk : diff.hunks) {
    out << "@@ -" << hunk.old_start << "," << hunk.old_len << " +"
        << hunk.new_start << "," << hunk.new_len << " @@\n";
    for (const HunkLine& line : hunk.lines) {
      switch (line.tag) {
        case LineTag::Context: out << ' '; break;
        case LineTag::Add: out << '+'; break;
        case LineTag::Del: out << '-'; break;
      }
      out << line.text << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Patch application

namespace {

// Collapses blank/tab runs to one space and strips trailing whitespace.
std::string normalize_ws_line(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  bool in_run = false;
  for (char c : line) {
    if (c == ' ' || c == '\t') {
      in_run = true;
      continue;
    }
    if (in_run) {
      out.push_back(' ');
      in_run = false;
    }
    out.push_back(c);
  }
  return out;
}

bool lines_match(const std::string& a, const std::string& b,
                 bool ignore_whitespace) {
  if (a == b) return true;
  if (!ignore_whitespace) return false;
  return normalize_ws_line(a) == normalize_ws_line(b);
}

}  // namespace

std::string apply_patch(const UnifiedDiff& diff, const std::string& source,
                        bool ignore_whitespace) {
  std::vector<std::string> src = split_lines(source);
  const bool final_newline = source.empty() || source.back() == '\n';

  std::vector<const Hunk*> hunks;
  hunks.reserve(diff.hunks.size());
  for (const Hunk& h : diff.hunks) hunks.push_back(&h);
  std::sort(hunks.begin(), hunks.end(), [](const Hunk* a, const Hunk* b) {
    return a->old_start < b->old_start;
  });

  std::vector<std::string> out;
  out.reserve(src.size());
  size_t cursor = 0;  // 0-based index into src

  for (const Hunk* hunk : hunks) {
    // With old_len == 0 the start is the line AFTER which to insert.
    size_t region_begin = hunk->old_len == 0
                              ? static_cast<size_t>(hunk->old_start)
                              : static_cast<size_t>(hunk->old_start - 1);
    if (region_begin < cursor) {
      throw Error(ErrorCode::ContextMisaligned, "hunks overlap at line " +
                                                    std::to_string(
                                                        hunk->old_start));
    }
    if (region_begin > src.size()) {
      throw Error(ErrorCode::ContextMisaligned,
                  "hunk start " + std::to_string(hunk->old_start) +
                      " is beyond end of file");
    }
    while (cursor < region_begin) out.push_back(src[cursor++]);

    for (const HunkLine& line : hunk->lines) {
      switch (line.tag) {
        case LineTag::Context:
        case LineTag::Del: {
          if (cursor >= src.size()) {
            throw Error(ErrorCode::ContextMisaligned,
                        "hunk extends beyond end of file");
          }
          if (!lines_match(src[cursor], line.text, ignore_whitespace)) {
            throw Error(ErrorCode::ContextMisaligned,
                        "expected '" + line.text + "' at line " +
                            std::to_string(cursor + 1) + ", found '" +
                            src[cursor] + "'");
          }
          if (line.tag == LineTag::Context) out.push_back(src[cursor]);
          ++cursor;
          break;
        }
        case LineTag::Add:
          out.push_back(line.text);
          break;
      }
    }
  }
  while (cursor < src.size()) out.push_back(src[cursor++]);

  std::string result;
  for (size_t k = 0; k < out.size(); ++k) {
    result += out[k];
    if (k + 1 < out.size() || final_newline) result += '\n';
  }
  return result;
}

// ---------------------------------------------------------------------------
// Modified-method extraction

std::vector<LineRange> changed_line_ranges(const UnifiedDiff& diff) {
  std::vector<LineRange> ranges;
  for (const Hunk& hunk : diff.hunks) {
    int pos = hunk.new_start;  // next line of the patched file
    for (const HunkLine& line : hunk.lines) {
      switch (line.tag) {
        case LineTag::Context:
          ++pos;
          break;
        case LineTag::Add:
          ranges.push_back({pos, pos});
          ++pos;
          break;
        case LineTag::Del:
          // Deletion point sits between patched lines pos-1 and pos.
          ranges.push_back({std::max(1, pos - 1), std::max(1, pos)});
          break;
      }
    }
  }
  if (ranges.empty()) return ranges;
  std::sort(ranges.begin(), ranges.end(),
            [](const LineRange& a, const LineRange& b) {
              return a.first != b.first ? a.first < b.first : a.last < b.last;
            });
  std::vector<LineRange> merged;
  for (const LineRange& r : ranges) {
    if (!merged.empty() && r.first <= merged.back().last + 1) {
      merged.back().last = std::max(merged.back().last, r.last);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

namespace {

struct Block {
  size_t open_tok = 0;
  size_t close_tok = 0;
  int open_line = 0;
  int close_line = 0;
  int header_line = 0;   // line where the signature/header begins
  bool is_method = false;
};

// Decides whether the tokens between the previous statement boundary and
// an opening brace look like a method signature: a parameter list whose
// '(' is introduced by a plain identifier, with no `new` in the header
// (anonymous class bodies and allocations are not methods).
bool header_is_method(const std::vector<Token>& toks, size_t header_begin,
                      size_t brace_idx) {
  size_t first_paren = brace_idx;
  for (size_t k = header_begin; k < brace_idx; ++k) {
    if (toks[k].kind == TokenKind::Keyword && toks[k].text == "new")
      return false;
    if (toks[k].kind == TokenKind::Punct && toks[k].text == "(" &&
        first_paren == brace_idx) {
      first_paren = k;
    }
  }
  if (first_paren == brace_idx || first_paren == header_begin) return false;
  const Token& before = toks[first_paren - 1];
  return before.kind == TokenKind::Identifier;
}

}  // namespace

std::string extract_modified_method(const std::string& patched_source,
                                    const std::vector<LineRange>& ranges) {
  if (ranges.empty()) {
    throw Error(ErrorCode::NoEnclosingMethod, "no changed lines given");
  }
  const std::vector<Token> toks = lex_code(patched_source);
  const std::vector<std::string> lines = split_lines(patched_source);

  // Pair braces and classify blocks.
  std::vector<Block> blocks;
  std::vector<size_t> stack;
  std::vector<size_t> boundary_before(toks.size(), 0);  // header start index
  size_t last_boundary = 0;
  for (size_t k = 0; k < toks.size(); ++k) {
    const Token& t = toks[k];
    if (t.kind != TokenKind::Punct) continue;
    if (t.text == "{") {
      boundary_before[k] = last_boundary;
      stack.push_back(k);
      last_boundary = k + 1;
    } else if (t.text == "}") {
      if (!stack.empty()) {
        size_t open = stack.back();
        stack.pop_back();
        Block b;
        b.open_tok = open;
        b.close_tok = k;
        b.open_line = toks[open].line;
        b.close_line = t.line;
        size_t hdr = boundary_before[open];
        b.header_line = hdr < open ? toks[hdr].line : toks[open].line;
        b.is_method = header_is_method(toks, hdr, open);
        blocks.push_back(b);
      }
      last_boundary = k + 1;
    } else if (t.text == ";") {
      last_boundary = k + 1;
    }
  }

  const int max_line = static_cast<int>(lines.size());
  int first = ranges.front().first;
  int last = 0;
  for (const LineRange& r : ranges) {
    first = std::min(first, r.first);
    last = std::max(last, std::min(r.last, max_line));
  }

  auto smallest_method_enclosing = [&](int lo, int hi) -> const Block* {
    const Block* best = nullptr;
    for (const Block& b : blocks) {
      if (!b.is_method) continue;
      if (b.header_line <= lo && b.close_line >= hi) {
        if (!best || (b.close_line - b.header_line) <
                         (best->close_line - best->header_line)) {
          best = &b;
        }
      }
    }
    return best;
  };

  const Block* enclosing = smallest_method_enclosing(first, last);
  if (enclosing == nullptr) {
    // Distinguish changes spanning two method bodies from changes that
    // sit outside any method.
    bool all_individually_enclosed = true;
    for (const LineRange& r : ranges) {
      if (smallest_method_enclosing(r.first, std::min(r.last, max_line)) ==
          nullptr) {
        all_individually_enclosed = false;
        break;
      }
    }
    if (all_individually_enclosed) {
      throw Error(ErrorCode::MultiMethod,
                  "changed lines span disjoint method bodies");
    }
    throw Error(ErrorCode::NoEnclosingMethod,
                "no method block encloses the change at lines " +
                    std::to_string(first) + ".." + std::to_string(last));
  }

  std::string method;
  for (int ln = enclosing->header_line; ln <= enclosing->close_line; ++ln) {
    if (ln < 1 || ln > max_line) continue;
    method += lines[static_cast<size_t>(ln - 1)];
    if (ln < enclosing->close_line) method += '\n';
  }
  return method;
}

// ---------------------------------------------------------------------------
// Dedup

std::vector<PatchRecord> dedup_corpus(const std::vector<PatchRecord>& records,
                                      DedupReport* report) {
  // (tool, bug, canonical text) -> surviving patch_id
  std::map<std::tuple<std::string, std::string, std::string>, std::string>
      keeper;
  // Pick survivors first: the lexicographically smallest patch_id per key.
  for (const PatchRecord& rec : records) {
    const std::string canon =
        normalize_exact(rec.method_after ? *rec.method_after : rec.diff_text);
    auto key = std::make_tuple(rec.tool, rec.bug.str(), canon);
    auto it = keeper.find(key);
    if (it == keeper.end() || rec.patch_id < it->second) {
      keeper[key] = rec.patch_id;
    }
  }
  std::vector<PatchRecord> out;
  out.reserve(records.size());
  for (const PatchRecord& rec : records) {
    const std::string canon =
        normalize_exact(rec.method_after ? *rec.method_after : rec.diff_text);
    auto key = std::make_tuple(rec.tool, rec.bug.str(), canon);
    const std::string& kept = keeper.at(key);
    if (kept == rec.patch_id) {
      out.push_back(rec);
    } else if (report) {
      report->removed.emplace_back(rec.patch_id, kept);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<PatchRecord> records)
    : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const PatchRecord& a, const PatchRecord& b) {
              return a.patch_id < b.patch_id;
            });
  for (size_t i = 0; i < records_.size(); ++i) {
    const PatchRecord& rec = records_[i];
    if (!by_id_.emplace(rec.patch_id, i).second) {
      throw Error(ErrorCode::ConfigError,
                  "duplicate patch_id '" + rec.patch_id + "'");
    }
    by_bug_[rec.bug].push_back(i);
    by_tool_[rec.tool].push_back(i);
  }
}

const PatchRecord* Corpus::find(const std::string& patch_id) const {
  auto it = by_id_.find(patch_id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::vector<const PatchRecord*> Corpus::for_bug(const BugId& bug) const {
  std::vector<const PatchRecord*> out;
  auto it = by_bug_.find(bug);
  if (it == by_bug_.end()) return out;
  out.reserve(it->second.size());
  for (size_t i : it->second) out.push_back(&records_[i]);
  return out;
}

std::vector<const PatchRecord*> Corpus::for_tool(
    const std::string& tool) const {
  std::vector<const PatchRecord*> out;
  auto it = by_tool_.find(tool);
  if (it == by_tool_.end()) return out;
  out.reserve(it->second.size());
  for (size_t i : it->second) out.push_back(&records_[i]);
  return out;
}

std::vector<std::string> Corpus::tools() const {
  std::vector<std::string> out;
  out.reserve(by_tool_.size());
  for (const auto& [tool, _] : by_tool_) out.push_back(tool);
  return out;
}

std::vector<BugId> Corpus::bugs() const {
  std::vector<BugId> out;
  out.reserve(by_bug_.size());
  for (const auto& [bug, _] : by_bug_) out.push_back(bug);
  return out;
}

// ---------------------------------------------------------------------------
// Ingest

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

}  // namespace

IngestResult ingest(const std::string& manifest_path, bool ignore_whitespace) {
  json manifest;
  fs::path base;
  try {
    std::ifstream in(manifest_path);
    if (!in) {
      throw Error(ErrorCode::ManifestUnreadable,
                  "cannot open '" + manifest_path + "'");
    }
    in >> manifest;
    base = fs::path(manifest_path).parent_path();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ManifestUnreadable, e.what());
  }
  if (!manifest.is_array()) {
    throw Error(ErrorCode::ManifestUnreadable, "manifest must be a JSON array");
  }

  IngestResult result;
  std::vector<PatchRecord> accepted;
  std::set<std::string> used_ids;

  size_t index = 0;
  for (const json& entry : manifest) {
    ++index;
    if (!entry.is_object() || !entry.contains("diff_path") ||
        !entry.contains("source_path") || !entry.contains("bug") ||
        !entry.contains("tool")) {
      throw Error(ErrorCode::ManifestUnreadable,
                  "entry " + std::to_string(index) +
                      " must carry diff_path, source_path, bug, tool");
    }

    PatchRecord rec;
    rec.bug = BugId::parse(entry.at("bug").get<std::string>());
    rec.tool = entry.at("tool").get<std::string>();
    if (entry.contains("label") && !entry.at("label").is_null()) {
      rec.label = parse_label_str(entry.at("label").get<std::string>());
    }
    if (entry.contains("year") && !entry.at("year").is_null()) {
      rec.year = entry.at("year").get<int>();
    }
    if (entry.contains("source") && !entry.at("source").is_null()) {
      rec.source = entry.at("source").get<std::string>();
    }

    const std::string diff_path = entry.at("diff_path").get<std::string>();
    std::string id = entry.contains("patch_id")
                         ? entry.at("patch_id").get<std::string>()
                         : rec.tool + "-" + rec.bug.str() + "-" +
                               stem_of(diff_path);
    std::string unique = id;
    for (int k = 2; used_ids.count(unique); ++k) {
      unique = id + "-" + std::to_string(k);
    }
    used_ids.insert(unique);
    rec.patch_id = unique;

    auto reject = [&](ValidationStatus status, const std::string& detail) {
      result.rejected.push_back({rec.patch_id, status, detail});
    };

    auto resolve = [&](const std::string& p) {
      fs::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };

    try {
      rec.diff_text = read_file(resolve(diff_path));
    } catch (const Error& e) {
      reject(ValidationStatus::MalformedHeader, e.what());
      continue;
    }

    UnifiedDiff diff;
    try {
      diff = parse_unified_diff(rec.diff_text);
    } catch (const Error& e) {
      reject(ValidationStatus::MalformedHeader, e.what());
      continue;
    }

    std::string source;
    try {
      source = read_file(resolve(entry.at("source_path").get<std::string>()));
    } catch (const Error& e) {
      reject(ValidationStatus::ApplyFailed, e.what());
      continue;
    }

    std::string patched;
    try {
      patched = apply_patch(diff, source, ignore_whitespace);
    } catch (const Error& e) {
      reject(e.code() == ErrorCode::ContextMisaligned
                 ? ValidationStatus::ContextMisaligned
                 : ValidationStatus::ApplyFailed,
             e.what());
      continue;
    }

    try {
      rec.method_after = extract_modified_method(patched,
                                                 changed_line_ranges(diff));
    } catch (const Error& e) {
      // Both multi-method and method-less changes violate the
      // single-method corpus rule.
      reject(ValidationStatus::MultiMethod, e.what());
      continue;
    }

    accepted.push_back(std::move(rec));
  }

  accepted = dedup_corpus(accepted, &result.dedup);
  result.corpus = Corpus(std::move(accepted));
  return result;
}

// ---------------------------------------------------------------------------
// JSONL

std::string patch_record_to_json_line(const PatchRecord& record) {
  json j;
  j["patch_id"] = record.patch_id;
  j["bug"] = record.bug.str();
  j["tool"] = record.tool;
  j["label"] = record.label ? json(label_str(*record.label)) : json(nullptr);
  j["year"] = record.year ? json(*record.year) : json(nullptr);
  j["diff"] = record.diff_text;
  if (record.method_after) j["method"] = *record.method_after;
  j["source"] = record.source;
  return j.dump();
}

PatchRecord patch_record_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::IoError,
                std::string("bad corpus line: ") + e.what());
  }
  PatchRecord rec;
  rec.patch_id = j.at("patch_id").get<std::string>();
  rec.bug = BugId::parse(j.at("bug").get<std::string>());
  rec.tool = j.at("tool").get<std::string>();
  if (j.contains("label") && !j.at("label").is_null()) {
    rec.label = parse_label_str(j.at("label").get<std::string>());
  }
  if (j.contains("year") && !j.at("year").is_null()) {
    rec.year = j.at("year").get<int>();
  }
  if (j.contains("diff")) rec.diff_text = j.at("diff").get<std::string>();
  if (j.contains("method") && !j.at("method").is_null()) {
    rec.method_after = j.at("method").get<std::string>();
  }
  if (j.contains("source") && !j.at("source").is_null()) {
    rec.source = j.at("source").get<std::string>();
  }
  return rec;
}

void write_corpus_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  }
  for (const PatchRecord& rec : corpus.records()) {
    out << patch_record_to_json_line(rec) << "\n";
  }
}

Corpus read_corpus_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  }
  std::vector<PatchRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(patch_record_from_json_line(line));
  }
  return Corpus(std::move(records));
}

}  // namespace historian
