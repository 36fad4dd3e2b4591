#include "historian/labelparse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "httplib.h"
#include "json.hpp"

namespace historian {

using nlohmann::json;

std::string parse_stage_str(ParseStage stage) {
  return stage == ParseStage::Keyword ? "keyword" : "fallback";
}

// ---------------------------------------------------------------------------
// Keyword extraction

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string to_lower(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(
                       static_cast<unsigned char>(c))));
  return out;
}

// True when `pattern` (already lowercase) occurs in `haystack` (already
// lowercase) delimited by word boundaries on both sides.
bool contains_word(const std::string& haystack, const std::string& pattern) {
  if (pattern.empty()) return false;
  for (size_t pos = haystack.find(pattern); pos != std::string::npos;
       pos = haystack.find(pattern, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    const size_t end = pos + pattern.size();
    const bool right_ok = end == haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

// Canonical keyword forms recognized at stage 1.
std::vector<std::string> keyword_forms(const std::string& label) {
  std::string low = to_lower(label);
  if (low.rfind("type-", 0) == 0 && low.size() == 6) {
    const char digit = low[5];
    return {std::string("type-") + digit, std::string("type ") + digit,
            std::string("type") + digit};
  }
  if (low == "not-a-clone") {
    return {"not a clone", "not-a-clone"};
  }
  return {low};
}

}  // namespace

std::set<std::string> extract_keywords(const std::string& response,
                                       const Vocabulary& vocab) {
  const std::string haystack = to_lower(response);
  std::set<std::string> found;
  for (const std::string& label : vocab.labels) {
    for (const std::string& form : keyword_forms(label)) {
      if (contains_word(haystack, form)) {
        found.insert(label);
        break;
      }
    }
  }
  return found;
}

// ---------------------------------------------------------------------------
// Lexicons

Lexicon builtin_lexicon() {
  Lexicon lex;
  auto& cc = lex.by_task["cc"];
  cc["Type-1"] = {{"identical", 1.0}, {"exact copy", 1.0}, {"verbatim", 1.0},
                  {"character for character", 1.0}};
  cc["Type-2"] = {{"renamed", 1.0},
                  {"renaming", 1.0},
                  {"different identifiers", 1.0},
                  {"different variable names", 1.0},
                  {"parameterized", 1.0}};
  cc["Type-3"] = {{"partial", 1.0},
                  {"partially", 1.0},
                  {"added statements", 1.0},
                  {"removed statements", 1.0},
                  {"gapped", 1.0},
                  {"near miss", 1.0}};
  cc["Type-4"] = {{"semantically equivalent", 1.5},
                  {"functionally equivalent", 1.5},
                  {"same behavior", 1.0},
                  {"different syntax", 1.0},
                  {"different implementation", 1.0}};
  cc["Not-a-Clone"] = {{"unrelated", 1.5},
                       {"not clones", 1.5},
                       {"no clone", 1.5},
                       {"dissimilar", 1.0},
                       {"no similarity", 1.5},
                       {"completely different", 1.5}};

  std::map<std::string, std::vector<LexiconEntry>> binary;
  binary["yes"] = {{"similar", 1.0},    {"equivalent", 1.0},
                   {"same effect", 1.0}, {"same behavior", 1.0},
                   {"agree", 1.0},       {"match", 1.0},
                   {"matches", 1.0},     {"affirmative", 1.5}};
  binary["no"] = {{"not similar", 2.5},    {"not equivalent", 2.5},
                  {"not the same", 2.5},   {"different", 1.0},
                  {"differ", 1.0},         {"dissimilar", 1.5},
                  {"unrelated", 1.5},      {"disagree", 1.5},
                  {"negative", 1.0}};
  lex.by_task["ss"] = binary;
  lex.by_task["se"] = binary;
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read lexicon '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigError,
                std::string("bad lexicon JSON: ") + e.what());
  }
  Lexicon lex;
  for (const auto& [task, labels] : j.items()) {
    for (const auto& [label, entries] : labels.items()) {
      std::vector<LexiconEntry>& out = lex.by_task[task][label];
      for (const json& entry : entries) {
        out.push_back({entry.at("pattern").get<std::string>(),
                       entry.value("weight", 1.0)});
      }
    }
  }
  return lex;
}

void write_lexicon(const Lexicon& lexicon, const std::string& path) {
  json j = json::object();
  for (const auto& [task, labels] : lexicon.by_task) {
    for (const auto& [label, entries] : labels) {
      json arr = json::array();
      for (const LexiconEntry& e : entries) {
        arr.push_back({{"pattern", e.pattern}, {"weight", e.weight}});
      }
      j[task][label] = std::move(arr);
    }
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write lexicon '" + path + "'");
  }
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Fallback classification

FallbackClassifier FallbackClassifier::lexical(Lexicon lex) {
  FallbackClassifier f;
  f.kind = Kind::Lexical;
  f.lexicon = std::move(lex);
  return f;
}

FallbackClassifier FallbackClassifier::builtin_lexical() {
  return lexical(builtin_lexicon());
}

FallbackClassifier FallbackClassifier::remote(const std::string& endpoint,
                                              int timeout_ms, Lexicon backup) {
  FallbackClassifier f;
  f.kind = Kind::RemoteNli;
  f.endpoint = endpoint;
  f.timeout_ms = timeout_ms;
  f.lexicon = std::move(backup);
  return f;
}

FallbackClassifier FallbackClassifier::none() { return {}; }

namespace {

std::map<std::string, double> normalize_scores(
    std::map<std::string, double> raw, const Vocabulary& vocab) {
  double total = 0;
  for (const std::string& label : vocab.labels) total += raw[label];
  std::map<std::string, double> out;
  if (total <= 0) {
    const double uniform = 1.0 / static_cast<double>(vocab.labels.size());
    for (const std::string& label : vocab.labels) out[label] = uniform;
  } else {
    for (const std::string& label : vocab.labels) out[label] = raw[label] / total;
  }
  return out;
}

std::map<std::string, double> lexical_scores(const std::string& response,
                                             const Vocabulary& vocab,
                                             const Lexicon& lexicon) {
  const std::string haystack = to_lower(response);
  std::map<std::string, double> raw;
  auto task_it = lexicon.by_task.find(task_str(vocab.task));
  for (const std::string& label : vocab.labels) {
    double score = 0;
    if (task_it != lexicon.by_task.end()) {
      auto label_it = task_it->second.find(label);
      if (label_it != task_it->second.end()) {
        for (const LexiconEntry& entry : label_it->second) {
          if (contains_word(haystack, to_lower(entry.pattern))) {
            score += entry.weight;
          }
        }
      }
    }
    raw[label] = score;
  }
  return normalize_scores(std::move(raw), vocab);
}

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;    // leading '/'
};

UrlParts split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  size_t path_start = scheme_end == std::string::npos
                          ? url.find('/')
                          : url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::map<std::string, double> remote_nli_scores(const std::string& response,
                                                const Vocabulary& vocab,
                                                const std::string& endpoint,
                                                int timeout_ms) {
  UrlParts url = split_url(endpoint);
  httplib::Client client(url.origin);
  client.set_connection_timeout(0, timeout_ms * 1000);
  client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);

  json request = {{"premise", response}, {"hypotheses", vocab.labels}};
  auto result = client.Post(url.path, request.dump(), "application/json");
  if (!result || result->status < 200 || result->status >= 300) {
    throw Error(ErrorCode::FallbackUnavailable,
                "entailment service at '" + endpoint + "' failed" +
                    (result ? " with status " + std::to_string(result->status)
                            : ""));
  }
  json body;
  try {
    body = json::parse(result->body);
    const auto& scores = body.at("scores");
    if (scores.size() != vocab.labels.size()) {
      throw std::runtime_error("score count mismatch");
    }
    std::map<std::string, double> raw;
    for (size_t i = 0; i < vocab.labels.size(); ++i) {
      raw[vocab.labels[i]] = std::max(0.0, scores.at(i).get<double>());
    }
    return normalize_scores(std::move(raw), vocab);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::FallbackUnavailable,
                std::string("bad entailment service reply: ") + e.what());
  }
}

}  // namespace

std::map<std::string, double> fallback_scores(
    const std::string& response, const Vocabulary& vocab,
    const FallbackClassifier& fallback) {
  switch (fallback.kind) {
    case FallbackClassifier::Kind::Lexical:
      return lexical_scores(response, vocab, fallback.lexicon);
    case FallbackClassifier::Kind::RemoteNli:
      try {
        return remote_nli_scores(response, vocab, fallback.endpoint,
                                 fallback.timeout_ms);
      } catch (const Error&) {
        if (!fallback.lexicon.by_task.empty()) {
          return lexical_scores(response, vocab, fallback.lexicon);
        }
        throw;
      }
    case FallbackClassifier::Kind::None:
      throw Error(ErrorCode::FallbackUnavailable,
                  "ambiguous response and no fallback classifier configured");
  }
  throw Error(ErrorCode::FallbackUnavailable, "unreachable");
}

ParseOutcome parse_label(const std::string& response, const Vocabulary& vocab,
                         const FallbackClassifier& fallback) {
  const std::set<std::string> keywords = extract_keywords(response, vocab);
  if (keywords.size() == 1) {
    ParseOutcome outcome;
    outcome.label = {vocab.task, *keywords.begin()};
    outcome.stage = ParseStage::Keyword;
    outcome.matched_keywords = {*keywords.begin()};
    return outcome;
  }

  const std::map<std::string, double> scores =
      fallback_scores(response, vocab, fallback);
  const std::string* best = nullptr;
  double best_score = -1;
  for (const std::string& label : vocab.labels) {
    const double s = scores.at(label);
    if (s > best_score) {  // strict: ties keep the earliest label
      best = &label;
      best_score = s;
    }
  }
  ParseOutcome outcome;
  outcome.label = {vocab.task, *best};
  outcome.stage = ParseStage::Fallback;
  outcome.matched_keywords.assign(keywords.begin(), keywords.end());
  outcome.fallback_score = best_score;
  return outcome;
}

}  // namespace historian
