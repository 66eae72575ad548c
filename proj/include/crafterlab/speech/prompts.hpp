#pragma once

#include <string_view>

namespace crafterlab {

// Classification prompts, byte-identical to prompts/goal.txt and
// prompts/question.txt. Backslash-n pairs are literal text, not newlines.
inline constexpr std::string_view kGoalPrompt =
    R"(The following text is a part of a transcript from a person playing a game for the first time. Is the person expressing a goal? Provide reasoning and answer with Finish[1] for yes or Finish[0] for no or if it cannot be determined.\n EX: I need more woooOODD! A: This is a goal because the person is expressing their need for wood resources. Finish[1]\n EX: Wait can I even get, oh yea. A: This is not a goal because the person is stating an incomplete thought. Finish[0]\n EX:)";

inline constexpr std::string_view kQuestionPrompt =
    R"(The following text is a part of a transcript from a person playing a game for the first time. Is the person asking a question? Provide reasoning and answer with Finish[1] for yes or Finish[0] for no or if it cannot be determined.\n EX: why is the blue button not working? A: This is a question because the person is asking a question about the game. Finish[1]\n EX: Yes. A: This is not a question because it is just a yes or no answer. Finish[0]\n EX:)";

}  // namespace crafterlab
