#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/trace/session.hpp"

namespace crafterlab {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// One utterance per line: "<timestamp_ms>\t<text>". Blank lines are skipped.
inline std::vector<Utterance> parse_transcript(std::string_view text) {
  std::vector<Utterance> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(line_no, "timestamp_ms", "missing tab separator");
    Utterance u;
    const auto ts = trim(line.substr(0, tab));
    const auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), u.timestamp_ms);
    if (ec != std::errc() || ptr != ts.data() + ts.size() || ts.empty())
      throw ParseError(line_no, "timestamp_ms", "not an integer: '" + std::string(ts) + "'");
    const auto body = trim(line.substr(tab + 1));
    if (body.empty()) throw ParseError(line_no, "text", "empty utterance");
    u.text = std::string(body);
    out.push_back(std::move(u));
  }
  return out;
}

inline std::string format_transcript(const std::vector<Utterance>& transcript) {
  std::string out;
  for (const auto& u : transcript) out += std::to_string(u.timestamp_ms) + "\t" + u.text + "\n";
  return out;
}

inline std::size_t count_words(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!ws && !in_word) ++n;
    in_word = !ws;
  }
  return n;
}

inline double word_rate(const std::vector<Utterance>& transcript, double play_duration_min) {
  if (!(play_duration_min > 0.0)) throw InputError("play duration must be positive");
  std::size_t words = 0;
  for (const auto& u : transcript) words += count_words(u.text);
  return static_cast<double>(words) / play_duration_min;
}

}  // namespace crafterlab
