#include "historian/promptkit.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace historian {

std::string task_str(RelationshipTask task) {
  switch (task) {
    case RelationshipTask::CC: return "cc";
    case RelationshipTask::SS: return "ss";
    case RelationshipTask::SE: return "se";
  }
  return "cc";
}

RelationshipTask parse_task_str(const std::string& s) {
  std::string low;
  for (char c : s) low.push_back(static_cast<char>(std::tolower(c)));
  if (low == "cc") return RelationshipTask::CC;
  if (low == "ss") return RelationshipTask::SS;
  if (low == "se") return RelationshipTask::SE;
  throw Error(ErrorCode::ConfigError, "unknown relationship task '" + s + "'");
}

std::string strategy_str(PromptStrategy s) {
  switch (s) {
    case PromptStrategy::Simple: return "simple";
    case PromptStrategy::Reasoning: return "reasoning";
    case PromptStrategy::LineSimilarity: return "line_similarity";
    case PromptStrategy::SimpleCodeClone: return "simple_code_clone";
    case PromptStrategy::Integrated: return "integrated";
  }
  return "simple";
}

std::string representation_str(Representation r) {
  return r == Representation::Diff ? "diff" : "method";
}

const Vocabulary& vocabulary_for(RelationshipTask task) {
  static const Vocabulary clone{
      RelationshipTask::CC,
      {"Type-1", "Type-2", "Type-3", "Type-4", "Not-a-Clone"}};
  static const Vocabulary binary_ss{RelationshipTask::SS, {"yes", "no"}};
  static const Vocabulary binary_se{RelationshipTask::SE, {"yes", "no"}};
  switch (task) {
    case RelationshipTask::CC: return clone;
    case RelationshipTask::SS: return binary_ss;
    case RelationshipTask::SE: return binary_se;
  }
  return clone;
}

namespace {

const char* strategy_abbrev(PromptStrategy s) {
  switch (s) {
    case PromptStrategy::Simple: return "s";
    case PromptStrategy::Reasoning: return "r";
    case PromptStrategy::LineSimilarity: return "ls";
    case PromptStrategy::SimpleCodeClone: return "scc";
    case PromptStrategy::Integrated: return "i";
  }
  return "s";
}

bool strategy_is_clone(PromptStrategy s) {
  return s == PromptStrategy::SimpleCodeClone ||
         s == PromptStrategy::Integrated;
}

}  // namespace

std::string PromptConfig::id() const {
  return std::string(strategy_abbrev(strategy)) + "-" + task_str(task) + "-" +
         representation_str(representation);
}

PromptConfig PromptConfig::parse_id(const std::string& id) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : id) {
    if (c == '-') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) {
    throw Error(ErrorCode::UnknownConfig, "bad config id '" + id + "'");
  }
  PromptConfig config;
  if (parts[0] == "s") config.strategy = PromptStrategy::Simple;
  else if (parts[0] == "r") config.strategy = PromptStrategy::Reasoning;
  else if (parts[0] == "ls") config.strategy = PromptStrategy::LineSimilarity;
  else if (parts[0] == "scc") config.strategy = PromptStrategy::SimpleCodeClone;
  else if (parts[0] == "i") config.strategy = PromptStrategy::Integrated;
  else throw Error(ErrorCode::UnknownConfig, "bad config id '" + id + "'");
  try {
    config.task = parse_task_str(parts[1]);
  } catch (const Error&) {
    throw Error(ErrorCode::UnknownConfig, "bad config id '" + id + "'");
  }
  if (parts[2] == "diff") config.representation = Representation::Diff;
  else if (parts[2] == "method") config.representation = Representation::Method;
  else throw Error(ErrorCode::UnknownConfig, "bad config id '" + id + "'");

  if (strategy_is_clone(config.strategy) !=
      (config.task == RelationshipTask::CC)) {
    throw Error(ErrorCode::UnknownConfig,
                "strategy/task pairing not in the catalog: '" + id + "'");
  }
  return config;
}

std::vector<PromptConfig> catalog() {
  static const std::pair<PromptStrategy, RelationshipTask> entries[] = {
      {PromptStrategy::Simple, RelationshipTask::SS},
      {PromptStrategy::Simple, RelationshipTask::SE},
      {PromptStrategy::Reasoning, RelationshipTask::SS},
      {PromptStrategy::Reasoning, RelationshipTask::SE},
      {PromptStrategy::LineSimilarity, RelationshipTask::SS},
      {PromptStrategy::LineSimilarity, RelationshipTask::SE},
      {PromptStrategy::SimpleCodeClone, RelationshipTask::CC},
      {PromptStrategy::Integrated, RelationshipTask::CC},
  };
  std::vector<PromptConfig> out;
  out.reserve(16);
  for (const auto& [strategy, task] : entries) {
    for (Representation rep : {Representation::Diff, Representation::Method}) {
      out.push_back({strategy, task, rep});
    }
  }
  return out;
}

std::string template_entry_name(PromptStrategy strategy,
                                RelationshipTask task) {
  return strategy_str(strategy) + "_" + task_str(task);
}

// ---------------------------------------------------------------------------
// Templates

namespace {

constexpr const char* kPreamble =
    "You are comparing two program patches that attempt to fix the same "
    "bug.\n\nCandidate patch ({{KIND}}):\n{{LEFT}}\n\nReference patch "
    "({{KIND}}):\n{{RIGHT}}\n\n";

std::string builtin_template(const std::string& entry) {
  std::string body;
  if (entry == "simple_ss") {
    body =
        "Are these two patches semantically similar? Answer with a single "
        "word: yes or no.\n";
  } else if (entry == "simple_se") {
    body =
        "Are these two patches semantically equivalent, producing the same "
        "program behavior for all inputs? Answer with a single word: yes or "
        "no.\n";
  } else if (entry == "reasoning_ss") {
    body =
        "Think step by step: first describe what each patch changes, then "
        "reason about whether the two changes have the same effect on the "
        "program. After your reasoning, give a final one-word answer: yes if "
        "the patches are semantically similar, no otherwise.\n";
  } else if (entry == "reasoning_se") {
    body =
        "Think step by step: first describe what each patch changes, then "
        "reason about whether the two changes have the same effect on the "
        "program. After your reasoning, give a final one-word answer: yes if "
        "the patches are semantically equivalent, no otherwise.\n";
  } else if (entry == "line_similarity_ss") {
    body =
        "First compare the patches line by line and report which lines of "
        "the candidate correspond to which lines of the reference. Then, "
        "based on that correspondence, decide whether the patches are "
        "semantically similar. Finish with a single word: yes or no.\n";
  } else if (entry == "line_similarity_se") {
    body =
        "First compare the patches line by line and report which lines of "
        "the candidate correspond to which lines of the reference. Then, "
        "based on that correspondence, decide whether the patches are "
        "semantically equivalent. Finish with a single word: yes or no.\n";
  } else if (entry == "simple_code_clone_cc") {
    body =
        "Classify the pair according to the standard code clone types: "
        "Type-1 (identical code up to whitespace and comments), Type-2 "
        "(identical up to renamed identifiers or changed literals), Type-3 "
        "(similar with statement-level additions, removals, or edits), "
        "Type-4 (same behavior through different syntax), or Not-a-Clone. "
        "Answer with exactly one of: Type-1, Type-2, Type-3, Type-4, "
        "Not-a-Clone.\n";
  } else if (entry == "integrated_cc") {
    body =
        "Work through the comparison in three steps. Step 1: reason in "
        "detail about what each patch changes and how the changes relate. "
        "Step 2: give a similarity score between 0 and 100. Step 3: classify "
        "the pair according to the standard code clone types, answering with "
        "exactly one of: Type-1, Type-2, Type-3, Type-4, Not-a-Clone.\n";
  } else {
    throw Error(ErrorCode::UnknownConfig, "no template entry '" + entry + "'");
  }
  return std::string(kPreamble) + body;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

void validate_template(const std::string& entry, const std::string& text) {
  if (count_occurrences(text, "{{LEFT}}") != 1 ||
      count_occurrences(text, "{{RIGHT}}") != 1) {
    throw Error(ErrorCode::BadTemplate,
                "template '" + entry +
                    "' must contain {{LEFT}} and {{RIGHT}} exactly once");
  }
}

const std::vector<std::string>& entry_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const PromptConfig& c : catalog()) {
      std::string name = template_entry_name(c.strategy, c.task);
      if (std::find(out.begin(), out.end(), name) == out.end()) {
        out.push_back(name);
      }
    }
    return out;
  }();
  return names;
}

}  // namespace

const TemplateSet& TemplateSet::builtin() {
  static const TemplateSet set = [] {
    TemplateSet s;
    for (const std::string& entry : entry_names()) {
      s.by_entry[entry] = builtin_template(entry);
    }
    return s;
  }();
  return set;
}

TemplateSet TemplateSet::load_dir(const std::string& dir) {
  TemplateSet set;
  for (const std::string& entry : entry_names()) {
    std::filesystem::path path = std::filesystem::path(dir) / (entry + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error(ErrorCode::BadTemplate,
                  "missing template file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    validate_template(entry, text);
    set.by_entry[entry] = std::move(text);
  }
  return set;
}

RenderedPrompt render(const PromptConfig& config, const PatchRecord& candidate,
                      const PatchRecord& reference,
                      const TemplateSet& templates) {
  if (strategy_is_clone(config.strategy) !=
      (config.task == RelationshipTask::CC)) {
    throw Error(ErrorCode::UnknownConfig,
                "strategy/task pairing not in the catalog: '" + config.id() +
                    "'");
  }
  const std::string entry = template_entry_name(config.strategy, config.task);
  auto it = templates.by_entry.find(entry);
  if (it == templates.by_entry.end()) {
    throw Error(ErrorCode::BadTemplate, "no template entry '" + entry + "'");
  }
  validate_template(entry, it->second);

  auto payload_of = [&](const PatchRecord& rec) -> const std::string& {
    if (config.representation == Representation::Diff) {
      return rec.diff_text;
    }
    if (!rec.method_after) {
      throw Error(ErrorCode::MissingRepresentation,
                  "patch '" + rec.patch_id + "' has no method text");
    }
    return *rec.method_after;
  };
  const std::string& left = payload_of(candidate);
  const std::string& right = payload_of(reference);
  const std::string kind = representation_str(config.representation);

  // Single pass so placeholder-like bytes inside payloads are never
  // re-substituted.
  const std::string& tpl = it->second;
  std::string text;
  text.reserve(tpl.size() + left.size() + right.size());
  for (size_t pos = 0; pos < tpl.size();) {
    if (tpl.compare(pos, 8, "{{LEFT}}") == 0) {
      text += left;
      pos += 8;
    } else if (tpl.compare(pos, 9, "{{RIGHT}}") == 0) {
      text += right;
      pos += 9;
    } else if (tpl.compare(pos, 8, "{{KIND}}") == 0) {
      text += kind;
      pos += 8;
    } else {
      text.push_back(tpl[pos]);
      ++pos;
    }
  }

  RenderedPrompt prompt;
  prompt.config = config;
  prompt.text = std::move(text);
  prompt.candidate_id = candidate.patch_id;
  prompt.reference_id = reference.patch_id;
  return prompt;
}

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4), used for stable cache keys.

namespace {

constexpr std::array<uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline uint32_t rotr(uint32_t x, int n) {
  return (x >> n) | (x << (32 - n));
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  std::array<uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                               0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

  std::string msg = data;
  const uint64_t bit_len = static_cast<uint64_t>(data.size()) * 8;
  msg.push_back(static_cast<char>(0x80));
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i) {
    msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xff));
  }

  for (size_t block = 0; block < msg.size(); block += 64) {
    uint32_t w[64];
    for (int t = 0; t < 16; ++t) {
      w[t] = (static_cast<uint32_t>(static_cast<unsigned char>(
                  msg[block + 4 * t]))
              << 24) |
             (static_cast<uint32_t>(static_cast<unsigned char>(
                  msg[block + 4 * t + 1]))
              << 16) |
             (static_cast<uint32_t>(static_cast<unsigned char>(
                  msg[block + 4 * t + 2]))
              << 8) |
             static_cast<uint32_t>(static_cast<unsigned char>(
                 msg[block + 4 * t + 3]));
    }
    for (int t = 16; t < 64; ++t) {
      uint32_t s0 = rotr(w[t - 15], 7) ^ rotr(w[t - 15], 18) ^ (w[t - 15] >> 3);
      uint32_t s1 = rotr(w[t - 2], 17) ^ rotr(w[t - 2], 19) ^ (w[t - 2] >> 10);
      w[t] = w[t - 16] + s0 + w[t - 7] + s1;
    }

    uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
    uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int t = 0; t < 64; ++t) {
      uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      uint32_t ch = (e & f) ^ (~e & g);
      uint32_t t1 = hh + s1 + ch + kSha256K[t] + w[t];
      uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      uint32_t t2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (uint32_t word : h) {
    for (int shift = 28; shift >= 0; shift -= 4) {
      out.push_back(hex[(word >> shift) & 0xf]);
    }
  }
  return out;
}

std::string prompt_fingerprint(const RenderedPrompt& prompt) {
  std::string material = prompt.config.id();
  material.push_back('\x1f');
  material += prompt.candidate_id;
  material.push_back('\x1f');
  material += prompt.reference_id;
  material.push_back('\x1f');
  material += prompt.text;
  return sha256_hex(material);
}

}  // namespace historian
