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

#include "smes/cues/prompt.hpp"

#include <sstream>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::cues {

CuePrompt build_cue_prompt(std::span<const ClipRef> clips) {
  if (clips.empty()) throw Error("empty_clip_set", "cue prompt needs at least one clip");
  CuePrompt p;
  p.question_1 = std::string(kEmotionalStateQuestion);
  p.question_2 = std::string(kLifeDistressQuestion);
  p.clips.assign(clips.begin(), clips.end());
  return p;
}

std::string render_prompt(const CuePrompt& prompt) {
  std::ostringstream os;
  const char* sep = "";
  for (const auto& c : prompt.clips) {
    os << sep << (c.kind == corpus::ClipKind::kVideo ? "Video [" : "Audio [") << c.media_id << ' '
       << util::format_seconds(c.start_s) << '-' << util::format_seconds(c.end_s) << ']';
    sep = "; ";
  }
  os << ":\nQuestion 1: \"" << prompt.question_1 << "\"\nQuestion 2: \"" << prompt.question_2 << "\"\n";
  return os.str();
}

std::string prompt_hash(const CuePrompt& prompt) {
  return util::sha256_hex(prompt.question_1 + '\n' + prompt.question_2);
}

}  // namespace smes::cues
