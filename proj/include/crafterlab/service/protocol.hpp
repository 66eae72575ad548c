#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crafterlab/service/live.hpp"

namespace crafterlab {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxRecordBytes = 1 << 20;

inline nlohmann::json frame_json(const Frame& f) {
  nlohmann::json status = nlohmann::json::object();
  for (std::size_t i = 0; i < kStatusCount; ++i) status[std::string(kStatusNames[i])] = f.status.values[i];
  nlohmann::json inventory = nlohmann::json::object();
  for (std::size_t i = 0; i < kItemCount; ++i)
    if (f.inventory.counts[i] > 0) inventory[std::string(kItemNames[i])] = f.inventory.counts[i];
  return {{"episode", f.episode},
          {"step", f.step},
          {"view", {{"width", f.view_width}, {"height", f.view_height}, {"tiles", f.tiles}}},
          {"status", status},
          {"inventory", inventory},
          {"sleeping", f.sleeping},
          {"daylight", f.daylight},
          {"game_over", f.game_over},
          {"time_remaining_ms", f.time_remaining_ms}};
}

// Achievement unlocks stay server-side; the client only learns what it could
// see on screen.
inline nlohmann::json events_json(const StepEvents& e, bool new_episode) {
  return {{"health_events", e.health_delta_events},
          {"status_increases", e.status_increases},
          {"episode_over", e.episode_over},
          {"new_episode", new_episode}};
}

inline nlohmann::json error_record(const std::string& kind, const std::string& message,
                                   const nlohmann::json& request = nullptr) {
  nlohmann::json j = {{"type", "error"}, {"payload", {{"kind", kind}, {"message", message}}}};
  if (request.is_object()) {
    if (auto it = request.find("session_id"); it != request.end()) j["session_id"] = *it;
    if (auto it = request.find("request_id"); it != request.end()) j["request_id"] = *it;
  }
  return j;
}

namespace detail {

inline std::string field_string(const nlohmann::json& obj, const char* key, bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw InputError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw InputError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

inline const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return "not_found";
  if (dynamic_cast<const StateError*>(&e)) return "state";
  if (dynamic_cast<const InputError*>(&e)) return "input";
  return "internal";
}

}  // namespace detail

// Handles one request record and returns the reply record.
inline nlohmann::json handle_request(LiveSessionManager& m, const nlohmann::json& req) {
  try {
    if (!req.is_object()) throw InputError("record must be an object");
    const std::string type = detail::field_string(req, "type");
    const nlohmann::json payload = req.contains("payload") ? req.at("payload") : nlohmann::json::object();
    if (!payload.is_object()) throw InputError("field 'payload' must be an object");
    nlohmann::json reply;
    if (type == "create") {
      std::string kind = detail::field_string(payload, "subject_kind", false);
      if (kind.empty()) kind = "adult";
      std::optional<std::uint64_t> seed;
      if (auto it = payload.find("seed"); it != payload.end()) {
        if (!it->is_number_unsigned()) throw InputError("field 'seed' must be a non-negative integer");
        seed = it->get<std::uint64_t>();
      }
      const auto r = m.create(kind, seed);
      reply = {{"type", "created"},
               {"session_id", r.session_id},
               {"payload",
                {{"protocol", kProtocolVersion},
                 {"actions", m.config().action_set},
                 {"time_limit_ms", m.options().time_limit_ms},
                 {"frame", frame_json(r.frame)}}}};
    } else {
      const std::string id = detail::field_string(req, "session_id");
      if (type == "act") {
        const auto r = m.act(id, detail::field_string(payload, "action"), detail::field_string(req, "request_id", false));
        reply = {{"type", "frame"},
                 {"session_id", id},
                 {"payload", {{"frame", frame_json(r.frame)}, {"events", events_json(r.events, r.new_episode)},
                              {"duplicate", r.duplicate}}}};
      } else if (type == "state") {
        reply = {{"type", "frame"}, {"session_id", id}, {"payload", {{"frame", frame_json(m.state(id))}}}};
      } else if (type == "close") {
        m.close(id);
        reply = {{"type", "closed"}, {"session_id", id}, {"payload", nlohmann::json::object()}};
      } else {
        throw InputError("unknown request type '" + type + "'");
      }
    }
    if (auto it = req.find("request_id"); it != req.end()) reply["request_id"] = *it;
    return reply;
  } catch (const Error& e) {
    return error_record(detail::error_kind(e), e.what(), req);
  } catch (const nlohmann::json::exception& e) {
    return error_record("input", e.what(), req);
  }
}

inline std::string handle_request_text(LiveSessionManager& m, std::string_view text) {
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return error_record("input", std::string("malformed record: ") + e.what()).dump();
  }
  return handle_request(m, req).dump();
}

// Stream framing: "<decimal byte count>\n<json bytes>".
inline std::string encode_record(std::string_view body) {
  std::string out = std::to_string(body.size());
  out += '\n';
  out += body;
  return out;
}

// Incremental decoder for the stream framing.
class RecordDecoder {
 public:
  void feed(std::string_view bytes) { buffer_.append(bytes); }

  std::optional<std::string> next() {
    const auto nl = buffer_.find('\n');
    if (nl == std::string::npos) {
      if (buffer_.size() > 20) throw InputError("record length prefix too long");
      return std::nullopt;
    }
    std::size_t len = 0;
    const auto [ptr, ec] = std::from_chars(buffer_.data(), buffer_.data() + nl, len);
    if (ec != std::errc() || ptr != buffer_.data() + nl || nl == 0) throw InputError("bad record length prefix");
    if (len > kMaxRecordBytes) throw InputError("record exceeds " + std::to_string(kMaxRecordBytes) + " bytes");
    if (buffer_.size() < nl + 1 + len) return std::nullopt;
    std::string body = buffer_.substr(nl + 1, len);
    buffer_.erase(0, nl + 1 + len);
    return body;
  }

  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::string buffer_;
};

}  // namespace crafterlab
