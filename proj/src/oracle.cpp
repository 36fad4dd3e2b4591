#include "historian/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace historian {

using nlohmann::json;

// Counting semaphore; std::counting_semaphore needs a compile-time
// ceiling, and the cap here is a runtime config value.
struct OracleBackend::Gate {
  explicit Gate(int slots) : available(slots) {}

  std::mutex mu;
  std::condition_variable cv;
  int available;

  void acquire() {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [this] { return available > 0; });
    --available;
  }
  void release() {
    {
      std::lock_guard<std::mutex> lock(mu);
      ++available;
    }
    cv.notify_one();
  }
};

OracleBackend OracleBackend::http(HttpBackendConfig config) {
  if (config.temperature < 0 || config.temperature > 1) {
    throw Error(ErrorCode::ConfigError, "temperature must be in [0,1]");
  }
  if (config.max_inflight < 1) {
    throw Error(ErrorCode::ConfigError, "max_inflight must be positive");
  }
  OracleBackend backend;
  backend.kind_ = Kind::Http;
  backend.http_ = std::move(config);
  backend.gate_ = std::make_shared<Gate>(backend.http_.max_inflight);
  return backend;
}

OracleBackend OracleBackend::mock(MockFixture fixture) {
  OracleBackend backend;
  backend.kind_ = Kind::Mock;
  backend.mock_ = std::move(fixture);
  return backend;
}

std::string OracleBackend::id() const {
  if (kind_ == Kind::Mock) return "mock";
  return "http:" + http_.model_name;
}

int OracleBackend::max_inflight() const {
  return kind_ == Kind::Http ? http_.max_inflight : 0;
}

namespace {

struct UrlParts {
  std::string origin;
  std::string path;
};

UrlParts split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  size_t path_start = scheme_end == std::string::npos
                          ? url.find('/')
                          : url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

OracleResponse OracleBackend::dispatch(const RenderedPrompt& prompt) const {
  OracleResponse response;
  response.prompt_fingerprint = prompt_fingerprint(prompt);
  response.backend_id = id();

  if (kind_ == Kind::Mock) {
    auto fp_it = mock_.by_fingerprint.find(response.prompt_fingerprint);
    if (fp_it != mock_.by_fingerprint.end()) {
      response.raw_text = fp_it->second;
      return response;
    }
    auto pair_it = mock_.by_pair.find({prompt.candidate_id,
                                       prompt.reference_id,
                                       task_str(prompt.config.task)});
    if (pair_it != mock_.by_pair.end()) {
      response.raw_text = pair_it->second;
      return response;
    }
    if (mock_.default_response) {
      response.raw_text = *mock_.default_response;
      return response;
    }
    throw Error(ErrorCode::MockMiss,
                "no canned response for (" + prompt.candidate_id + ", " +
                    prompt.reference_id + ", " +
                    task_str(prompt.config.task) + ")");
  }

  const UrlParts url = split_url(http_.base_url);
  const json request = {{"model", http_.model_name},
                        {"prompt", prompt.text},
                        {"temperature", http_.temperature}};
  const std::string body = request.dump();

  gate_->acquire();
  struct Release {
    Gate* gate;
    ~Release() { gate->release(); }
  } release{gate_.get()};

  const auto start = std::chrono::steady_clock::now();
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= http_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(50LL << (attempt - 1)));
    }
    httplib::Client client(url.origin);
    client.set_connection_timeout(http_.timeout_ms / 1000,
                                  (http_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(http_.timeout_ms / 1000,
                            (http_.timeout_ms % 1000) * 1000);
    auto result = client.Post(url.path, body, "application/json");
    if (!result) {
      last_failure = "transport error " + httplib::to_string(result.error());
      continue;
    }
    if (result->status < 200 || result->status >= 300) {
      last_failure = "HTTP status " + std::to_string(result->status);
      continue;
    }
    try {
      json reply = json::parse(result->body);
      response.raw_text = reply.at("text").get<std::string>();
    } catch (const std::exception& e) {
      last_failure = std::string("bad reply body: ") + e.what();
      continue;
    }
    response.latency_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    return response;
  }
  throw Error(ErrorCode::BackendUnreachable,
              "backend '" + http_.base_url + "' failed after " +
                  std::to_string(http_.max_retries + 1) + " attempts: " +
                  last_failure);
}

// ---------------------------------------------------------------------------
// Cache

ResponseCache::ResponseCache(const std::string& path) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;  // fresh cache file
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      OracleResponse r;
      r.prompt_fingerprint = j.at("fingerprint").get<std::string>();
      r.raw_text = j.at("raw_text").get<std::string>();
      r.backend_id = j.value("backend_id", std::string());
      store_[r.prompt_fingerprint] = std::move(r);
    } catch (const std::exception&) {
      // Corrupt line: only that entry is lost.
    }
  }
}

std::optional<OracleResponse> ResponseCache::get(
    const std::string& fingerprint) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = store_.find(fingerprint);
  if (it == store_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(const OracleResponse& response) {
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = store_.emplace(response.prompt_fingerprint, response);
  if (!inserted) return;  // first write wins; responses are content-keyed
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot append to cache '" + path_ + "'");
  }
  json j = {{"fingerprint", response.prompt_fingerprint},
            {"raw_text", response.raw_text},
            {"backend_id", response.backend_id}};
  out << j.dump() << "\n";
}

size_t ResponseCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return store_.size();
}

OracleResponse query(const OracleBackend& backend, const RenderedPrompt& prompt,
                     ResponseCache* cache) {
  const std::string fp = prompt_fingerprint(prompt);
  if (cache) {
    if (auto hit = cache->get(fp)) {
      hit->cached = true;
      hit->latency_ms = 0;
      return *hit;
    }
  }
  OracleResponse response = backend.dispatch(prompt);
  if (cache) cache->put(response);
  return response;
}

// ---------------------------------------------------------------------------
// Expert-relation mock

MockFixture fixture_from_relations(
    const std::vector<RelationRecord>& relations) {
  MockFixture fixture;
  for (const RelationRecord& rel : relations) {
    const Vocabulary& vocab = vocabulary_for(rel.task);
    if (std::find(vocab.labels.begin(), vocab.labels.end(), rel.label) ==
        vocab.labels.end()) {
      throw Error(ErrorCode::InvalidLabel,
                  "label '" + rel.label + "' is not in the " +
                      task_str(rel.task) + " vocabulary");
    }
    fixture.by_pair[{rel.candidate, rel.reference, task_str(rel.task)}] =
        rel.label;
  }
  return fixture;
}

OracleBackend mock_from_relations(
    const std::vector<RelationRecord>& relations) {
  return OracleBackend::mock(fixture_from_relations(relations));
}

std::vector<RelationRecord> read_relations_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read relations '" + path + "'");
  }
  std::vector<RelationRecord> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      RelationRecord rel;
      rel.candidate = j.at("candidate").get<std::string>();
      rel.reference = j.at("reference").get<std::string>();
      rel.task = parse_task_str(j.at("task").get<std::string>());
      rel.label = j.at("label").get<std::string>();
      out.push_back(std::move(rel));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::IoError, "bad relation at line " +
                                          std::to_string(lineno) + ": " +
                                          e.what());
    }
  }
  return out;
}

void write_relations_jsonl(const std::vector<RelationRecord>& relations,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write relations '" + path + "'");
  }
  for (const RelationRecord& rel : relations) {
    json j = {{"candidate", rel.candidate},
              {"reference", rel.reference},
              {"task", task_str(rel.task)},
              {"label", rel.label}};
    out << j.dump() << "\n";
  }
}

}  // namespace historian
