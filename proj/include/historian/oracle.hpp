#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "historian/labelparse.hpp"
#include "historian/promptkit.hpp"

namespace historian {

struct OracleResponse {
  std::string prompt_fingerprint;
  std::string raw_text;  // byte-exact, never trimmed
  std::string backend_id;
  double latency_ms = 0;
  bool cached = false;
};

struct HttpBackendConfig {
  std::string base_url;  // e.g. "http://127.0.0.1:8000/complete"
  std::string model_name;
  double temperature = 0.1;
  int timeout_ms = 30000;
  int max_retries = 2;   // total attempts = max_retries + 1
  int max_inflight = 8;  // concurrent requests cap
};

// Canned responses for offline runs, looked up by fingerprint first,
// then by (candidate, reference, task), then the default if any.
struct MockFixture {
  std::map<std::string, std::string> by_fingerprint;
  std::map<std::tuple<std::string, std::string, std::string>, std::string>
      by_pair;
  std::optional<std::string> default_response;
};

class OracleBackend {
 public:
  static OracleBackend http(HttpBackendConfig config);
  static OracleBackend mock(MockFixture fixture);

  // Sends one prompt, bypassing any cache. Http retries transport
  // failures with exponential backoff, then throws BackendUnreachable;
  // Mock throws MockMiss when nothing matches.
  OracleResponse dispatch(const RenderedPrompt& prompt) const;

  std::string id() const;
  bool is_mock() const { return kind_ == Kind::Mock; }
  int max_inflight() const;

 private:
  enum class Kind { Http, Mock };

  OracleBackend() = default;

  Kind kind_ = Kind::Mock;
  HttpBackendConfig http_;
  MockFixture mock_;
  // Counting semaphore bounding concurrent HTTP dispatches.
  struct Gate;
  std::shared_ptr<Gate> gate_;
};

// Fingerprint-keyed response store, optionally persisted as
// append-only JSON lines. Corrupt lines are skipped on load.
class ResponseCache {
 public:
  ResponseCache() = default;  // memory-only
  explicit ResponseCache(const std::string& path);

  std::optional<OracleResponse> get(const std::string& fingerprint) const;
  void put(const OracleResponse& response);
  size_t size() const;

 private:
  std::map<std::string, OracleResponse> store_;
  std::string path_;
  mutable std::mutex mu_;
};

// Cache-through query: hits return the stored response with
// cached=true; misses dispatch, store, and return.
OracleResponse query(const OracleBackend& backend, const RenderedPrompt& prompt,
                     ResponseCache* cache);

// One expert-annotated relationship judgment.
struct RelationRecord {
  std::string candidate;
  std::string reference;
  RelationshipTask task = RelationshipTask::CC;
  std::string label;
};

// Canned texts are exactly the annotated labels, so stage-1 keyword
// parsing always recovers them. Throws InvalidLabel for labels outside
// their task's vocabulary.
MockFixture fixture_from_relations(const std::vector<RelationRecord>& relations);

// fixture_from_relations wrapped into a ready Mock backend.
OracleBackend mock_from_relations(const std::vector<RelationRecord>& relations);

// JSONL {candidate, reference, task, label} per line.
std::vector<RelationRecord> read_relations_jsonl(const std::string& path);
void write_relations_jsonl(const std::vector<RelationRecord>& relations,
                           const std::string& path);

}  // namespace historian
