#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/hash.hpp"
#include "crafterlab/trace/session.hpp"

// Session files are UTF-8 JSON lines; see docs/session_format.md.
namespace crafterlab {

namespace session_io {

using nlohmann::json;

inline json cell_json(Cell c) { return json::array({c.x, c.y}); }

inline std::string header_line(const Session& s) {
  json j = {{"record", "session"},
            {"schema", kSessionSchemaVersion},
            {"subject_kind", s.subject_kind},
            {"session_id", s.session_id},
            {"config_fingerprint", hex64(s.config_fingerprint)},
            {"base_seed", s.base_seed},
            {"spawn", cell_json(s.spawn)}};
  return j.dump();
}

inline std::string episode_line(const Episode& e) {
  json j = {{"record", "episode"},
            {"index", e.episode_index},
            {"world_seed", e.world_seed},
            {"initial_hash", hex64(e.initial_hash)},
            {"initial_state", e.initial_abstract_state}};
  return j.dump();
}

inline std::string step_line(const TrajectoryStep& st) {
  json j = {{"record", "step"},
            {"i", st.step_index},
            {"a", st.action},
            {"sb", st.abstract_state_before},
            {"sa", st.abstract_state_after},
            {"cell", cell_json(st.player_cell)},
            {"h", hex64(st.state_hash)},
            {"ach", st.events.achievements_unlocked},
            {"hp", st.events.health_delta_events},
            {"inc", st.events.status_increases},
            {"over", st.events.episode_over}};
  if (st.wall_clock_ms) j["t"] = *st.wall_clock_ms;
  if (st.reward) j["r"] = *st.reward;
  return j.dump();
}

inline std::string episode_end_line(const Episode& e) {
  json cells = json::array();
  for (const auto& c : e.cells_visited) cells.push_back(cell_json(c));
  json j = {{"record", "episode_end"},
            {"index", e.episode_index},
            {"achievements", e.achievements},
            {"cells_visited", cells}};
  return j.dump();
}

inline std::string utterance_line(const Utterance& u) {
  return json{{"record", "utterance"}, {"t", u.timestamp_ms}, {"text", u.text}}.dump();
}

inline std::string end_line(const Session& s) {
  return json{{"record", "end"}, {"episodes", s.episodes.size()}, {"steps", s.total_steps()}, {"closed", s.closed}}
      .dump();
}

}  // namespace session_io

inline void write_session(std::ostream& out, const Session& s) {
  using namespace session_io;
  out << header_line(s) << '\n';
  for (const auto& e : s.episodes) {
    out << episode_line(e) << '\n';
    for (const auto& st : e.steps) out << step_line(st) << '\n';
    out << episode_end_line(e) << '\n';
  }
  if (s.transcript) {
    out << json{{"record", "transcript"}, {"count", s.transcript->size()}}.dump() << '\n';
    for (const auto& u : *s.transcript) out << utterance_line(u) << '\n';
  }
  out << end_line(s) << '\n';
}

inline std::string serialize_session(const Session& s) {
  std::ostringstream os;
  write_session(os, s);
  return os.str();
}

inline void save_session(const Session& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_session(out, s);
  if (!out) throw InputError("write failed for '" + path + "'");
}

struct LoadOptions {
  // Accept a file cut off after any complete line (live sessions that crashed).
  bool allow_partial = false;
};

namespace session_io {

class LineParser {
 public:
  LineParser(std::size_t line, const json& j) : line_(line), j_(j) {}

  const json& at(const char* field) const {
    auto it = j_.find(field);
    if (it == j_.end()) throw ParseError(line_, field, "missing field");
    return *it;
  }
  std::string str(const char* field) const {
    const auto& v = at(field);
    if (!v.is_string()) throw ParseError(line_, field, "expected string");
    return v.get<std::string>();
  }
  std::int64_t i64(const char* field) const {
    const auto& v = at(field);
    if (!v.is_number_integer()) throw ParseError(line_, field, "expected integer");
    return v.get<std::int64_t>();
  }
  std::uint64_t u64(const char* field) const {
    const auto& v = at(field);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ParseError(line_, field, "expected non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t hex(const char* field) const {
    const std::string s = str(field);
    if (s.size() != 16 || s.find_first_not_of("0123456789abcdef") != std::string::npos)
      throw ParseError(line_, field, "expected 16 hex digits");
    return parse_hex64(s);
  }
  bool boolean(const char* field) const {
    const auto& v = at(field);
    if (!v.is_boolean()) throw ParseError(line_, field, "expected boolean");
    return v.get<bool>();
  }
  Cell cell(const char* field) const { return cell_of(at(field), field); }
  Cell cell_of(const json& v, const char* field) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      throw ParseError(line_, field, "expected [x, y]");
    return {v[0].get<int>(), v[1].get<int>()};
  }
  std::vector<std::string> strings(const char* field) const {
    const auto& v = at(field);
    if (!v.is_array()) throw ParseError(line_, field, "expected list");
    std::vector<std::string> out;
    for (const auto& x : v) {
      if (!x.is_string()) throw ParseError(line_, field, "expected list of strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }
  std::vector<int> ints(const char* field) const {
    const auto& v = at(field);
    if (!v.is_array()) throw ParseError(line_, field, "expected list");
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw ParseError(line_, field, "expected list of integers");
      out.push_back(x.get<int>());
    }
    return out;
  }
  bool has(const char* field) const { return j_.contains(field); }
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  const json& j_;
};

}  // namespace session_io

inline Session parse_session(std::string_view text, LoadOptions opts = {}) {
  using namespace session_io;
  Session s;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_end = false;
  bool episode_open = false;
  std::optional<std::size_t> transcript_expected;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    const bool terminated = nl != std::string_view::npos;
    if (!terminated) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (raw.empty()) continue;
    if (have_end) throw ParseError(line_no, "", "content after end record");
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error& e) {
      if (opts.allow_partial && !terminated) break;
      throw ParseError(line_no, "", std::string("malformed record: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(line_no, "", "record must be an object");
    const LineParser p(line_no, j);
    const std::string kind = p.str("record");
    if (!have_header && kind != "session") throw ParseError(line_no, "record", "first record must be 'session'");
    if (kind == "session") {
      if (have_header) throw ParseError(line_no, "record", "duplicate session header");
      const auto schema = p.i64("schema");
      if (schema < 1 || schema > kSessionSchemaVersion)
        throw ParseError(line_no, "schema", "unsupported schema version " + std::to_string(schema));
      s.subject_kind = p.str("subject_kind");
      if (!valid_subject_kind(s.subject_kind)) throw ParseError(line_no, "subject_kind", "invalid subject kind");
      s.session_id = p.str("session_id");
      s.config_fingerprint = p.hex("config_fingerprint");
      s.base_seed = p.u64("base_seed");
      s.spawn = p.cell("spawn");
      have_header = true;
    } else if (kind == "episode") {
      if (episode_open) throw ParseError(line_no, "record", "episode opened before previous episode_end");
      Episode e;
      e.episode_index = p.u64("index");
      if (!s.episodes.empty() && e.episode_index <= s.episodes.back().episode_index)
        throw ParseError(line_no, "index", "episode indices must increase");
      e.world_seed = p.u64("world_seed");
      e.initial_hash = p.hex("initial_hash");
      e.initial_abstract_state = p.str("initial_state");
      e.cells_visited.insert(s.spawn);
      s.episodes.push_back(std::move(e));
      episode_open = true;
    } else if (kind == "step") {
      if (!episode_open) throw ParseError(line_no, "record", "step outside an episode");
      Episode& e = s.episodes.back();
      if (e.finished()) throw ParseError(line_no, "record", "step after episode_over");
      TrajectoryStep st;
      st.step_index = p.i64("i");
      if (!e.steps.empty() && st.step_index <= e.steps.back().step_index)
        throw ParseError(line_no, "i", "step_index not strictly increasing");
      st.action = p.str("a");
      st.abstract_state_before = p.str("sb");
      st.abstract_state_after = p.str("sa");
      st.player_cell = p.cell("cell");
      st.state_hash = p.hex("h");
      st.events.achievements_unlocked = p.strings("ach");
      st.events.health_delta_events = p.ints("hp");
      for (int d : st.events.health_delta_events)
        if (d != 1 && d != -1) throw ParseError(line_no, "hp", "health events must be +1 or -1");
      st.events.status_increases = p.strings("inc");
      st.events.episode_over = p.boolean("over");
      if (p.has("t")) st.wall_clock_ms = p.i64("t");
      if (p.has("r")) {
        const auto& r = p.at("r");
        if (!r.is_number()) throw ParseError(line_no, "r", "expected number");
        st.reward = r.get<double>();
      }
      for (const auto& a : st.events.achievements_unlocked)
        if (std::find(e.achievements.begin(), e.achievements.end(), a) == e.achievements.end())
          e.achievements.push_back(a);
      e.cells_visited.insert(st.player_cell);
      e.steps.push_back(std::move(st));
    } else if (kind == "episode_end") {
      if (!episode_open) throw ParseError(line_no, "record", "episode_end without episode");
      const Episode& e = s.episodes.back();
      if (p.u64("index") != e.episode_index) throw ParseError(line_no, "index", "does not match open episode");
      if (p.strings("achievements") != e.achievements)
        throw ParseError(line_no, "achievements", "inconsistent with step events");
      std::set<Cell> cells;
      const auto& arr = p.at("cells_visited");
      if (!arr.is_array()) throw ParseError(line_no, "cells_visited", "expected list");
      for (const auto& c : arr) cells.insert(p.cell_of(c, "cells_visited"));
      if (cells != e.cells_visited) throw ParseError(line_no, "cells_visited", "inconsistent with step cells");
      episode_open = false;
    } else if (kind == "transcript") {
      if (s.transcript) throw ParseError(line_no, "record", "duplicate transcript");
      s.transcript.emplace();
      transcript_expected = p.u64("count");
    } else if (kind == "utterance") {
      if (!s.transcript) throw ParseError(line_no, "record", "utterance before transcript record");
      s.transcript->push_back({p.i64("t"), p.str("text")});
    } else if (kind == "end") {
      if (episode_open) throw ParseError(line_no, "record", "end inside an open episode");
      if (p.u64("episodes") != s.episodes.size()) throw ParseError(line_no, "episodes", "episode count mismatch");
      if (p.u64("steps") != s.total_steps()) throw ParseError(line_no, "steps", "step count mismatch");
      s.closed = p.boolean("closed");
      have_end = true;
    } else {
      throw ParseError(line_no, "record", "unknown record type '" + kind + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "", "empty session file");
  if (transcript_expected && s.transcript->size() != *transcript_expected && !(opts.allow_partial && !have_end))
    throw ParseError(line_no, "count", "transcript truncated");
  if (!have_end && !opts.allow_partial) throw ParseError(line_no, "", "truncated: missing end record");
  return s;
}

inline Session load_session(const std::string& path, LoadOptions opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  try {
    return parse_session(os.str(), opts);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.field(), e.message() + " (in '" + path + "')");
  }
}

// Incremental writer for live sessions: every line is flushed as soon as it
// is known, so a crash loses at most the line in flight.
class SessionWriter {
 public:
  SessionWriter(const std::string& path, const Session& header) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw InputError("cannot write '" + path + "'");
    emit(session_io::header_line(header));
  }
  void episode_started(const Episode& e) { emit(session_io::episode_line(e)); }
  void step(const TrajectoryStep& st) { emit(session_io::step_line(st)); }
  void episode_finished(const Episode& e) { emit(session_io::episode_end_line(e)); }
  void finish(const Session& s) {
    if (s.transcript) {
      emit(nlohmann::json{{"record", "transcript"}, {"count", s.transcript->size()}}.dump());
      for (const auto& u : *s.transcript) emit(session_io::utterance_line(u));
    }
    emit(session_io::end_line(s));
    out_.close();
  }

 private:
  void emit(const std::string& line) {
    out_ << line << '\n';
    out_.flush();
  }
  std::ofstream out_;
};

}  // namespace crafterlab
