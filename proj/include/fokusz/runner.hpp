/* Copyright 2026 The fokusz Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Repeated-run experiment driver for chat-completion endpoints, and the stub
// server used to exercise it.
//
// Request body (documented wire format):
//
//   {"model": "<id>", "seed": <run seed>,
//    "messages": [
//      {"role": "system", "content": "<system prompt>"},
//      {"role": "user", "content": [
//         {"type": "image", "data": "<base64 image bytes>"},
//         {"type": "text", "text": "<question>"}]}]}
//
// The OpenAI variant replaces the image part with
//   {"type": "image_url", "image_url": {"url": "data:<mime>;base64,<...>"}}.
// The reply text is read from choices[0].message.content.

#ifndef FOKUSZ_RUNNER_HPP_
#define FOKUSZ_RUNNER_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "fokusz/corpus.hpp"
#include "json.hpp"

namespace fokusz::runner {

// System prompt sent verbatim with every query.
extern const char* const kSystemPrompt;

inline constexpr const char* kApiKeyEnv = "FOKUSZ_API_KEY";

enum class WireFormat { kDocumented, kOpenAi };

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};  // doubled after every failure
};

struct RunConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080/v1/chat/completions
  std::string model;
  int runs = 30;
  std::vector<FocusCondition> conditions{FocusCondition::kObjectFocus,
                                         FocusCondition::kSubjectFocus};
  std::int64_t seed_base = 0;  // run r uses seed_base + r
  bool send_seed = true;
  int max_inflight = 4;
  RetryPolicy retry;
  std::chrono::seconds timeout{60};
  WireFormat wire = WireFormat::kDocumented;
  std::string api_key;
  std::filesystem::path output;      // trials JSONL, appended
  std::filesystem::path image_root;  // base for relative image_ref paths
  bool resume = false;
  std::optional<std::size_t> limit;  // at most this many new trials
};

// Reads FOKUSZ_API_KEY; AuthMissing when unset or empty.
std::string api_key_from_env();

struct PlannedTrial {
  const StimulusItem* item = nullptr;
  FocusCondition condition = FocusCondition::kObjectFocus;
  std::uint32_t run = 0;
};

std::string trial_id_for(const std::string& model, const PlannedTrial& t);
std::int64_t seed_for_run(const RunConfig& config, std::uint32_t run);

nlohmann::ordered_json request_body(const RunConfig& config, const std::string& image_base64,
                                    const std::string& image_mime, const std::string& question,
                                    std::int64_t seed);

std::string base64_encode(std::span<const unsigned char> bytes);

// Extracts the reply text; nullopt when the body has no usable content.
std::optional<std::string> reply_text(const nlohmann::json& response);

struct TrialFailure {
  std::string trial_id;
  int attempts = 0;
  std::string message;
};

struct RunReport {
  std::size_t planned = 0;
  std::size_t already_done = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::size_t requests_sent = 0;
  std::vector<TrialFailure> failures;
  std::map<std::string, int> attempts;  // trial_id -> attempts used
};

// Runs stimuli x conditions x runs queries, appending each success to
// config.output. Failures are written to <output>.failures.jsonl and never
// abort the batch. With resume, trials already in the output are skipped.
RunReport run_experiment(const RunConfig& config, std::span<const StimulusItem> stimuli);

// ---------------------------------------------------------------------------

struct StubOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  std::string path = "/v1/chat/completions";
  std::string expected_key;  // empty accepts any key
  std::string reply = "A fiú lefesti a lányt.";
  // HTTP status to answer for the n-th (1-based) arrival of an identical
  // body. 200 produces a normal reply.
  std::function<int(const nlohmann::json& body, int arrival)> plan;
};

// In-process chat-completions stub. Records every request body.
class StubServer {
 public:
  explicit StubServer(StubOptions options = {});
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  int start();
  void stop();
  // Blocks the calling thread until stop().
  void serve_forever();

  std::string url() const;
  std::size_t request_count() const;
  std::vector<nlohmann::json> bodies() const;
  std::vector<int> statuses() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fokusz::runner

#endif  // FOKUSZ_RUNNER_HPP_
