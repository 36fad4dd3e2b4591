#include "historian/clonedet.hpp"

#include <algorithm>
#include <numeric>

namespace historian {

std::string match_stage_str(MatchStage stage) {
  switch (stage) {
    case MatchStage::Exact: return "Exact";
    case MatchStage::Token: return "Token";
    case MatchStage::Structural: return "Structural";
    case MatchStage::None: return "None";
  }
  return "None";
}

std::string normalize_exact(const std::string& method_text) {
  std::string out;
  for (const Token& t : lex_code(method_text)) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

std::vector<Token> tokenize(const std::string& code,
                            std::vector<std::string>* warnings) {
  return lex_code(code, warnings);
}

std::vector<Token> abstract_tokens(std::vector<Token> tokens) {
  for (Token& t : tokens) {
    switch (t.kind) {
      case TokenKind::Identifier:
        t.text = "ID";
        break;
      case TokenKind::Number:
      case TokenKind::String:
      case TokenKind::Char:
        t.text = "LIT";
        break;
      case TokenKind::Keyword:
      case TokenKind::Punct:
        break;
    }
  }
  return tokens;
}

TokenBag token_bag(const std::vector<Token>& tokens) {
  TokenBag bag;
  for (const Token& t : tokens) ++bag[t.text];
  return bag;
}

double overlap_similarity(const TokenBag& a, const TokenBag& b) {
  long long size_a = 0, size_b = 0;
  for (const auto& [_, n] : a) size_a += n;
  for (const auto& [_, n] : b) size_b += n;
  if (size_a == 0 || size_b == 0) {
    throw Error(ErrorCode::EmptyBag, "overlap similarity of an empty bag");
  }
  long long common = 0;
  for (const auto& [text, n] : a) {
    auto it = b.find(text);
    if (it != b.end()) common += std::min(n, it->second);
  }
  return static_cast<double>(common) /
         static_cast<double>(std::max(size_a, size_b));
}

MatchStage cascade_match(const PatchRecord& a, const PatchRecord& b,
                         double theta) {
  if (!a.method_after || !b.method_after) {
    throw Error(ErrorCode::MissingRepresentation,
                "cascade_match needs method text on both patches (" +
                    a.patch_id + ", " + b.patch_id + ")");
  }
  const std::string canon_a = normalize_exact(*a.method_after);
  const std::string canon_b = normalize_exact(*b.method_after);
  if (canon_a == canon_b) return MatchStage::Exact;

  const std::vector<Token> toks_a = tokenize(*a.method_after);
  const std::vector<Token> toks_b = tokenize(*b.method_after);
  if (overlap_similarity(token_bag(toks_a), token_bag(toks_b)) >= theta) {
    return MatchStage::Token;
  }

  const std::vector<Token> abs_a = abstract_tokens(toks_a);
  const std::vector<Token> abs_b = abstract_tokens(toks_b);
  if (abs_a.size() == abs_b.size()) {
    bool equal = true;
    for (size_t i = 0; i < abs_a.size(); ++i) {
      if (abs_a[i].text != abs_b[i].text) {
        equal = false;
        break;
      }
    }
    if (equal) return MatchStage::Structural;
  }
  return MatchStage::None;
}

namespace {

struct UnionFind {
  std::vector<size_t> parent;

  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), size_t{0});
  }
  size_t find(size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

ClusterSet cluster(const std::vector<PatchRecord>& patches, double theta,
                   const std::vector<std::pair<std::string, std::string>>&
                       overrides,
                   bool global_mode) {
  if (!global_mode) {
    for (size_t i = 1; i < patches.size(); ++i) {
      if (!(patches[i].bug == patches[0].bug)) {
        throw Error(ErrorCode::ConfigError,
                    "clustering is per-bug; got " + patches[0].bug.str() +
                        " and " + patches[i].bug.str());
      }
    }
  }

  // Work over an id-sorted view so the result is order-independent.
  std::vector<const PatchRecord*> sorted;
  sorted.reserve(patches.size());
  for (const PatchRecord& p : patches) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const PatchRecord* a, const PatchRecord* b) {
              return a->patch_id < b->patch_id;
            });

  std::map<std::string, size_t> index;
  for (size_t i = 0; i < sorted.size(); ++i) index[sorted[i]->patch_id] = i;

  UnionFind uf(sorted.size());
  ClusterSet result;
  for (size_t i = 0; i < sorted.size(); ++i) {
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      MatchStage stage = cascade_match(*sorted[i], *sorted[j], theta);
      if (stage == MatchStage::None) continue;
      uf.unite(i, j);
      result.edges.push_back(
          {sorted[i]->patch_id, sorted[j]->patch_id, stage, false});
    }
  }

  for (const auto& [a, b] : overrides) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      throw Error(ErrorCode::OverridePairUnknown,
                  "override names unknown patch: (" + a + ", " + b + ")");
    }
    uf.unite(ia->second, ib->second);
    std::string lo = std::min(a, b), hi = std::max(a, b);
    result.edges.push_back({lo, hi, MatchStage::None, true});
  }

  std::map<size_t, std::vector<std::string>> groups;
  for (size_t i = 0; i < sorted.size(); ++i) {
    groups[uf.find(i)].push_back(sorted[i]->patch_id);
  }
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end());
    result.clusters.push_back(std::move(members));
  }
  std::sort(result.clusters.begin(), result.clusters.end());
  std::sort(result.edges.begin(), result.edges.end(),
            [](const ClusterEdge& x, const ClusterEdge& y) {
              if (x.a != y.a) return x.a < y.a;
              if (x.b != y.b) return x.b < y.b;
              return x.manual < y.manual;
            });
  return result;
}

std::string redundancy_origin_str(RedundancyOrigin origin) {
  switch (origin) {
    case RedundancyOrigin::BaselineOnly: return "BaselineOnly";
    case RedundancyOrigin::AddedOnly: return "AddedOnly";
    case RedundancyOrigin::Both: return "Both";
  }
  return "BaselineOnly";
}

RedundancyReport redundancy_report(
    const TemporalSlice& slice,
    const std::vector<const PatchRecord*>& tool_patches, const Corpus& corpus,
    double theta) {
  RedundancyReport report;
  report.tool = slice.tool;
  report.cutoff_year = slice.cutoff_year;

  std::map<CorrectnessLabel, RedundancyRow> rows;
  std::vector<const PatchRecord*> candidates = tool_patches;
  std::sort(candidates.begin(), candidates.end(),
            [](const PatchRecord* a, const PatchRecord* b) {
              return a->patch_id < b->patch_id;
            });

  auto stronger = [](MatchStage a, MatchStage b) {
    return static_cast<int>(a) < static_cast<int>(b) ? a : b;
  };

  for (const PatchRecord* cand : candidates) {
    if (!cand->label) continue;
    RedundancyRow& row = rows[*cand->label];
    row.label = *cand->label;
    ++row.total;

    bool in_baseline = false, in_added = false;
    MatchStage best = MatchStage::None;
    for (const PatchRecord* ref : corpus.for_bug(cand->bug)) {
      if (ref->patch_id == cand->patch_id) continue;
      if (!ref->label || *ref->label != *cand->label) continue;
      const bool from_baseline = slice.baseline.count(ref->patch_id) > 0;
      const bool from_added = slice.added.count(ref->patch_id) > 0;
      if (!from_baseline && !from_added) continue;
      MatchStage stage = cascade_match(*cand, *ref, theta);
      if (stage == MatchStage::None) continue;
      in_baseline = in_baseline || from_baseline;
      in_added = in_added || from_added;
      best = stronger(best, stage);
    }
    if (!in_baseline && !in_added) continue;

    RedundancyOrigin origin;
    if (in_baseline && in_added) {
      origin = RedundancyOrigin::Both;
      ++row.both;
    } else if (in_baseline) {
      origin = RedundancyOrigin::BaselineOnly;
      ++row.baseline_only;
    } else {
      origin = RedundancyOrigin::AddedOnly;
      ++row.added_only;
    }
    row.redundant.push_back({cand->patch_id, origin, best});
  }

  for (auto& [label, row] : rows) {
    (void)label;
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const RedundancyRow& a, const RedundancyRow& b) {
              return static_cast<int>(a.label) < static_cast<int>(b.label);
            });
  return report;
}

}  // namespace historian
