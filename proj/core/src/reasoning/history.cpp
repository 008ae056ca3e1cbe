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

#include "smes/reasoning/history.hpp"

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::reasoning {

void History::check_index(int index) const {
  if (index <= last_index()) {
    throw Error("invalid_history", "history index " + std::to_string(index) + " does not follow " +
                                       std::to_string(last_index()));
  }
}

void History::append_context(int index, cues::TurnContext context) {
  check_index(index);
  entries_.push_back(HistoryEntry{index, std::move(context)});
}

void History::append_response(int index, ResponseRecord response) {
  check_index(index);
  if (util::trim(response.text).empty()) throw Error("empty_response", "response record text is empty");
  entries_.push_back(HistoryEntry{index, std::move(response)});
}

void History::check_ready() const {
  if (entries_.empty()) throw Error("empty_history", "history is empty");
  if (!entries_.back().is_context()) throw Error("history_not_ready", "history must end with a turn context");
}

}  // namespace smes::reasoning
