// Copyright 2026 The smes-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smes/cues/context.hpp"

#include "smes/error.hpp"

namespace smes::cues {
namespace {

constexpr std::string_view kCueOpen = "[CUE] ";
constexpr std::string_view kUttOpen = "[UTT] ";
constexpr std::string_view kUttJoin = " [UTT] ";

// Reads an escaped segment starting at `pos` until an unescaped '[' or the
// end. Returns the unescaped text and leaves `pos` on the stop character.
std::optional<std::string> read_segment(std::string_view s, std::size_t& pos) {
  std::string out;
  while (pos < s.size()) {
    if (s[pos] == '[') {
      if (pos + 1 < s.size() && s[pos + 1] == '[') {
        out.push_back('[');
        pos += 2;
        continue;
      }
      break;
    }
    out.push_back(s[pos++]);
  }
  return out;
}

}  // namespace

std::string escape_segment(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    out.push_back(c);
    if (c == '[') out.push_back('[');
  }
  return out;
}

TurnContext compose_turn_context(EmotionCue cue, std::string utterance, CompositionFlags flags) {
  const bool with_cue = flags.include_cue && !cue.text.empty();
  const bool with_utt = flags.include_utterance && !utterance.empty();
  if (!with_cue && !with_utt) throw Error("empty_turn_context", "turn context has neither cue nor utterance");
  std::string rendered;
  if (with_cue) {
    rendered += kCueOpen;
    rendered += escape_segment(cue.text);
  }
  if (with_utt) {
    rendered += with_cue ? kUttJoin : kUttOpen;
    rendered += escape_segment(utterance);
  }
  return TurnContext{std::move(cue), std::move(utterance), std::move(rendered)};
}

std::optional<ContextSegments> parse_rendered_context(std::string_view s) {
  ContextSegments seg;
  std::size_t pos = 0;
  bool any = false;
  if (s.substr(0, kCueOpen.size()) == kCueOpen) {
    pos = kCueOpen.size();
    seg.cue = *read_segment(s, pos);
    any = true;
    if (pos == s.size()) return seg;
    // An unescaped '[' must open the utterance marker, preceded by the
    // single separating space that read_segment consumed into the cue.
    if (seg.cue.empty() || seg.cue.back() != ' ' || s.substr(pos, kUttOpen.size()) != kUttOpen) return std::nullopt;
    seg.cue.pop_back();
  } else if (s.substr(0, kUttOpen.size()) != kUttOpen) {
    return std::nullopt;
  }
  if (s.substr(pos, kUttOpen.size()) == kUttOpen) {
    pos += kUttOpen.size();
    seg.utterance = *read_segment(s, pos);
    any = true;
    if (pos != s.size()) return std::nullopt;
  }
  if (!any) return std::nullopt;
  return seg;
}

}  // namespace smes::cues
