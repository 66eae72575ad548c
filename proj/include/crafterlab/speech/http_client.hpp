#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "crafterlab/speech/classifier.hpp"

namespace crafterlab {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

inline Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw InputError("endpoint '" + url + "' has no scheme");
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

// POSTs {"model": ..., "prompt": ...} as JSON and returns the response body
// unchanged. The bearer credential comes from CRAFTERLAB_LM_API_KEY.
class HttpCompletionClient : public CompletionClient {
 public:
  explicit HttpCompletionClient(const ClassifierConfig& cfg)
      : endpoint_(split_endpoint(cfg.endpoint)), timeout_ms_(cfg.timeout_ms), max_retries_(cfg.max_retries) {
    if (const char* key = std::getenv(kCredentialEnv)) credential_ = key;
  }

  std::string complete(const std::string& model, const std::string& prompt) override {
    const std::string body = nlohmann::json{{"model", model}, {"prompt", prompt}}.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= max_retries_; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250 << std::min(attempt - 1, 5)));
      httplib::Client client(endpoint_.base);
      client.set_connection_timeout(std::chrono::milliseconds(timeout_ms_));
      client.set_read_timeout(std::chrono::milliseconds(timeout_ms_));
      httplib::Headers headers;
      if (!credential_.empty()) headers.emplace("Authorization", "Bearer " + credential_);
      auto res = client.Post(endpoint_.path, headers, body, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 200 && res->status < 300) return res->body;
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status < 500 && res->status != 429) break;
    }
    throw TransportError("completion request to " + endpoint_.base + endpoint_.path + " failed: " + last_error);
  }

 private:
  Endpoint endpoint_;
  int timeout_ms_;
  int max_retries_;
  std::string credential_;
};

}  // namespace crafterlab
