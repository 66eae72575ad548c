#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crafterlab/speech/classifier.hpp"
#include "crafterlab/speech/transcript.hpp"
#include "crafterlab/trace/session.hpp"

namespace crafterlab {

inline constexpr std::size_t kMinEligibleUtterances = 5;

struct SpeechReport {
  std::optional<double> word_rate;  // words per minute; empty without a play duration
  std::optional<double> goal_fraction;
  std::optional<double> question_fraction;
  std::size_t n_utterances = 0;
  std::size_t goals = 0;
  std::size_t questions = 0;
  std::size_t goal_unclassified = 0;
  std::size_t question_unclassified = 0;
  bool eligible = false;
};

// Wall-clock span of the recorded steps, when timestamps were kept.
inline std::optional<double> play_duration_min(const Session& session) {
  std::optional<std::int64_t> first, last;
  for (const auto& ep : session.episodes)
    for (const auto& st : ep.steps)
      if (st.wall_clock_ms) {
        if (!first) first = st.wall_clock_ms;
        last = st.wall_clock_ms;
      }
  if (!first || *last <= *first) return std::nullopt;
  return static_cast<double>(*last - *first) / 60000.0;
}

inline SpeechReport speech_report(const std::vector<Utterance>& transcript, Classifier& classifier,
                                  std::optional<double> duration_min = std::nullopt) {
  SpeechReport r;
  r.n_utterances = transcript.size();
  r.eligible = r.n_utterances >= kMinEligibleUtterances;
  if (duration_min) r.word_rate = word_rate(transcript, *duration_min);
  std::vector<std::string> texts;
  for (const auto& u : transcript) texts.push_back(u.text);
  auto tally = [&](UtteranceKind kind, std::size_t& yes, std::size_t& unclassified) -> std::optional<double> {
    std::size_t classified = 0;
    for (const auto& c : classifier.classify_all(texts, kind)) {
      if (!c.label) {
        ++unclassified;
        continue;
      }
      ++classified;
      if (*c.label) ++yes;
    }
    if (classified == 0) return std::nullopt;
    return static_cast<double>(yes) / static_cast<double>(classified);
  };
  r.goal_fraction = tally(UtteranceKind::goal, r.goals, r.goal_unclassified);
  r.question_fraction = tally(UtteranceKind::question, r.questions, r.question_unclassified);
  return r;
}

inline SpeechReport speech_report(const Session& session, Classifier& classifier,
                                  std::optional<double> duration_min = std::nullopt) {
  if (!session.transcript) throw InputError("session '" + session.session_id + "' has no transcript");
  if (!duration_min) duration_min = play_duration_min(session);
  return speech_report(*session.transcript, classifier, duration_min);
}

}  // namespace crafterlab
