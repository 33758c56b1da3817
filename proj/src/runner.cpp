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

#include "fokusz/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>

#include "fokusz/random.hpp"
#include "fokusz/text.hpp"
#include "httplib.h"

namespace fokusz::runner {

const char* const kSystemPrompt =
    "Egy kísérlet résztvevője vagy, válaszolj egy rövid egész mondattal a következő "
    "kérdésre a képről, amit adni fogok. A válaszodban említsd meg mindkét szereplőt és "
    "a cselekvést, vagy eseményt, amelyet az egyik a másikkal csinál! Fogalmazz tömören!";

std::string api_key_from_env() {
  const char* v = std::getenv(kApiKeyEnv);
  if (!v || !*v) {
    throw Error(ErrorKind::kAuthMissing, std::string(kApiKeyEnv) + " is not set");
  }
  return v;
}

std::string trial_id_for(const std::string& model, const PlannedTrial& t) {
  return model + "/r" + std::to_string(t.run) + "/" + std::string(label(t.condition)) + "/" +
         t.item->item_id;
}

std::int64_t seed_for_run(const RunConfig& config, std::uint32_t run) {
  return config.seed_base + static_cast<std::int64_t>(run);
}

std::string base64_encode(std::span<const unsigned char> bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

nlohmann::ordered_json request_body(const RunConfig& config, const std::string& image_base64,
                                    const std::string& image_mime, const std::string& question,
                                    std::int64_t seed) {
  nlohmann::ordered_json body;
  body["model"] = config.model;
  if (config.send_seed) body["seed"] = seed;
  nlohmann::ordered_json image;
  if (config.wire == WireFormat::kOpenAi) {
    image["type"] = "image_url";
    image["image_url"] = {{"url", "data:" + image_mime + ";base64," + image_base64}};
  } else {
    image["type"] = "image";
    image["data"] = image_base64;
  }
  nlohmann::ordered_json text_part;
  text_part["type"] = "text";
  text_part["text"] = question;
  nlohmann::ordered_json system;
  system["role"] = "system";
  system["content"] = kSystemPrompt;
  nlohmann::ordered_json user;
  user["role"] = "user";
  user["content"] = nlohmann::ordered_json::array({image, text_part});
  body["messages"] = nlohmann::ordered_json::array({system, user});
  return body;
}

std::optional<std::string> reply_text(const nlohmann::json& response) {
  if (!response.is_object()) return std::nullopt;
  auto choices = response.find("choices");
  if (choices == response.end() || !choices->is_array() || choices->empty()) return std::nullopt;
  const auto& message = (*choices)[0].value("message", nlohmann::json::object());
  auto content = message.find("content");
  if (content == message.end()) return std::nullopt;
  if (content->is_string()) return content->get<std::string>();
  if (content->is_array()) {
    std::string joined;
    for (const auto& part : *content) {
      if (part.is_object() && part.value("type", "") == "text") {
        joined += part.value("text", "");
      }
    }
    if (!joined.empty()) return joined;
  }
  return std::nullopt;
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host:port
  std::string path;
};

Endpoint parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw Error(ErrorKind::kInvalidArgument, "endpoint must be an http(s) URL: " + url);
  }
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

std::string mime_for(const std::filesystem::path& p) {
  std::string ext = text::casefold(p.extension().string());
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  return "image/png";
}

bool retryable(int status) { return status == 429 || status >= 500; }

struct Outcome {
  bool ok = false;
  std::string reply;
  int attempts = 0;
  std::string message;
};

// Serialises appends from worker threads.
class Appender {
 public:
  explicit Appender(const std::filesystem::path& path) : out_(path, std::ios::app) {
    if (!out_) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  void write(const std::string& line) {
    std::lock_guard lock(mu_);
    out_ << line;
    out_.flush();
  }

 private:
  std::mutex mu_;
  std::ofstream out_;
};

}  // namespace

RunReport run_experiment(const RunConfig& config, std::span<const StimulusItem> stimuli) {
  if (config.api_key.empty()) {
    throw Error(ErrorKind::kAuthMissing, std::string(kApiKeyEnv) + " is not set");
  }
  if (config.runs < 1 || config.max_inflight < 1 || config.retry.max_attempts < 1) {
    throw Error(ErrorKind::kInvalidArgument, "runs, max_inflight and attempts must be >= 1");
  }
  if (config.output.empty()) throw Error(ErrorKind::kInvalidArgument, "no output path");
  const Endpoint endpoint = parse_endpoint(config.endpoint);

  std::set<TrialKey> done;
  if (std::filesystem::exists(config.output) && std::filesystem::file_size(config.output) > 0) {
    if (!config.resume) {
      throw Error(ErrorKind::kInvalidArgument,
                  config.output.string() + " already has records; pass --resume");
    }
    for (const auto& r : load_trials(config.output)) done.insert(key_of(r));
  }

  // images are loaded once per stimulus
  std::map<std::string, std::pair<std::string, std::string>> images;
  for (const auto& item : stimuli) {
    std::filesystem::path p = item.image_ref;
    if (p.is_relative()) p = config.image_root / p;
    std::string bytes = text::read_file(p);
    images[item.item_id] = {
        base64_encode({reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()}),
        mime_for(p)};
  }

  RunReport report;
  std::vector<PlannedTrial> pending;
  for (std::uint32_t run = 0; run < static_cast<std::uint32_t>(config.runs); ++run) {
    for (FocusCondition cond : config.conditions) {
      for (const auto& item : stimuli) {
        ++report.planned;
        PlannedTrial t{&item, cond, run};
        if (done.contains(TrialKey{config.model, run, cond, item.item_id})) {
          ++report.already_done;
          continue;
        }
        pending.push_back(t);
      }
    }
  }
  if (config.limit && pending.size() > *config.limit) pending.resize(*config.limit);

  Appender trials_out(config.output);
  std::filesystem::path failures_path = config.output;
  failures_path += ".failures.jsonl";
  std::unique_ptr<Appender> failures_out;
  std::mutex report_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> requests{0};

  auto attempt_trial = [&](httplib::Client& client, const PlannedTrial& t) {
    Outcome o;
    const auto& [image, mime] = images.at(t.item->item_id);
    std::int64_t seed = seed_for_run(config, t.run);
    std::string body = request_body(config, image, mime, t.item->question(t.condition), seed).dump();
    httplib::Headers headers{{"Authorization", "Bearer " + config.api_key}};
    auto backoff = config.retry.backoff_base;
    for (o.attempts = 1; o.attempts <= config.retry.max_attempts; ++o.attempts) {
      ++requests;
      auto res = client.Post(endpoint.path, headers, body, "application/json");
      bool retry = true;
      if (!res) {
        o.message = "transport error: " + httplib::to_string(res.error());
      } else if (res->status == 200) {
        auto parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (auto reply = reply_text(parsed)) {
          o.ok = true;
          o.reply = *reply;
          return o;
        }
        o.message = "response without message content";
      } else {
        o.message = "HTTP " + std::to_string(res->status);
        retry = retryable(res->status);
      }
      if (!retry || o.attempts == config.retry.max_attempts) break;
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    return o;
  };

  auto worker = [&] {
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(config.timeout);
    client.set_read_timeout(config.timeout);
    client.set_write_timeout(config.timeout);
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const PlannedTrial& t = pending[i];
      Outcome o = attempt_trial(client, t);
      std::string id = trial_id_for(config.model, t);
      if (o.ok) {
        TrialRecord r;
        r.trial_id = id;
        r.source_id = config.model;
        r.source_kind = SourceKind::kVlm;
        r.run_index = t.run;
        r.condition = t.condition;
        r.item_id = t.item->item_id;
        r.response_text = text::nfc(o.reply);
        r.seed = seed_for_run(config, t.run);
        trials_out.write(trial_to_json_line(r));
      } else {
        nlohmann::ordered_json f;
        f["trial_id"] = id;
        f["attempts"] = o.attempts;
        f["error"] = o.message;
        std::lock_guard lock(report_mu);
        if (!failures_out) failures_out = std::make_unique<Appender>(failures_path);
        failures_out->write(f.dump() + "\n");
      }
      std::lock_guard lock(report_mu);
      report.attempts[id] = o.attempts;
      if (o.ok) {
        ++report.succeeded;
      } else {
        ++report.failed;
        report.failures.push_back({id, o.attempts, o.message});
      }
    }
  };

  std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.max_inflight), pending.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  report.requests_sent = requests.load();
  return report;
}

// ---------------------------------------------------------------------------

struct StubServer::Impl {
  StubOptions options;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mu;
  std::vector<nlohmann::json> bodies;
  std::vector<int> statuses;
  std::map<std::string, int> arrivals;
};

StubServer::StubServer(StubOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  Impl* impl = impl_.get();
  impl->server.Post(impl->options.path, [impl](const httplib::Request& req,
                                               httplib::Response& res) {
    auto body = nlohmann::json::parse(req.body, nullptr, false);
    int status = 200;
    {
      std::lock_guard lock(impl->mu);
      int arrival = ++impl->arrivals[req.body];
      if (!impl->options.expected_key.empty() &&
          req.get_header_value("Authorization") != "Bearer " + impl->options.expected_key) {
        status = 401;
      } else if (body.is_discarded()) {
        status = 400;
      } else if (impl->options.plan) {
        status = impl->options.plan(body, arrival);
      }
      impl->bodies.push_back(body);
      impl->statuses.push_back(status);
    }
    res.status = status;
    if (status == 200) {
      nlohmann::json reply = {
          {"choices",
           {{{"index", 0},
             {"message", {{"role", "assistant"}, {"content", impl->options.reply}}}}}}};
      res.set_content(reply.dump(), "application/json");
    } else {
      res.set_content(R"({"error":"injected"})", "application/json");
    }
  });
}

StubServer::~StubServer() { stop(); }

int StubServer::start() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  } else {
    impl_->port = -1;
  }
  if (impl_->port <= 0) throw Error(ErrorKind::kIo, "stub server could not bind");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void StubServer::serve_forever() {
  if (!impl_->thread.joinable()) start();
  impl_->thread.join();
}

void StubServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubServer::url() const {
  return "http://" + impl_->options.host + ":" + std::to_string(impl_->port) + impl_->options.path;
}

std::size_t StubServer::request_count() const {
  std::lock_guard lock(impl_->mu);
  return impl_->bodies.size();
}

std::vector<nlohmann::json> StubServer::bodies() const {
  std::lock_guard lock(impl_->mu);
  return impl_->bodies;
}

std::vector<int> StubServer::statuses() const {
  std::lock_guard lock(impl_->mu);
  return impl_->statuses;
}

}  // namespace fokusz::runner
