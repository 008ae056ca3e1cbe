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

#include "smes/reasoning/linearize.hpp"

#include "smes/error.hpp"

namespace smes::reasoning {

std::vector<int> TrainingSequence::history_span() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < tokens.size() && roles[i] == Role::kHist; ++i) out.push_back(tokens[i]);
  return out;
}

std::string render_entry(const HistoryEntry& entry) {
  if (entry.is_context()) return entry.context().rendered;
  return "[SYS] " + cues::escape_segment(entry.response().text);
}

int marker_id(const SegmentSchema& schema, Role role, const model::Vocab& vocab) {
  const auto& m = schema.marker(role);
  auto id = vocab.find(m);
  if (!id || !vocab.is_special(*id)) {
    throw Error("marker_not_atomic", "marker '" + m + "' is not an atomic vocabulary entry");
  }
  return *id;
}

std::vector<int> encode_history(const History& history, const SegmentSchema& schema, const model::Vocab& vocab,
                                std::size_t budget) {
  history.check_ready();
  std::vector<std::vector<int>> pieces;
  pieces.reserve(history.size());
  std::size_t total = 1;
  for (const auto& e : history.entries()) {
    pieces.push_back(vocab.encode_text(render_entry(e)));
    total += pieces.back().size();
  }
  std::size_t first = 0;
  while (budget > 0 && total > budget && first + 1 < pieces.size()) {
    total -= pieces[first].size();
    ++first;
  }
  std::vector<int> out;
  out.reserve(total);
  out.push_back(marker_id(schema, Role::kHist, vocab));
  for (std::size_t i = first; i < pieces.size(); ++i) out.insert(out.end(), pieces[i].begin(), pieces[i].end());
  return out;
}

TrainingSequence linearize(const History& history, const TurnTargets& gold, const SegmentSchema& schema,
                           const model::Vocab& vocab, std::size_t history_budget) {
  schema.validate();
  TrainingSequence seq;
  auto push = [&](int id, Role role) {
    seq.tokens.push_back(id);
    seq.roles.push_back(role);
    const bool target = schema.loss_policy == LossPolicy::kFullSequence || role != Role::kHist;
    seq.loss_mask.push_back(target ? 1 : 0);
  };

  for (int id : encode_history(history, schema, vocab, history_budget)) push(id, Role::kHist);
  if (schema.includes(Role::kUsrEmo)) {
    push(marker_id(schema, Role::kUsrEmo, vocab), Role::kUsrEmo);
    push(vocab.user_emotion_token(gold.user_emotion), Role::kUsrEmo);
  }
  if (schema.includes(Role::kStrat)) {
    push(marker_id(schema, Role::kStrat, vocab), Role::kStrat);
    push(vocab.strategy_token(gold.strategy), Role::kStrat);
  }
  if (schema.includes(Role::kSysEmo)) {
    push(marker_id(schema, Role::kSysEmo, vocab), Role::kSysEmo);
    push(vocab.system_emotion_token(gold.system_emotion), Role::kSysEmo);
  }
  push(marker_id(schema, Role::kResp, vocab), Role::kResp);
  for (int id : vocab.encode_text(gold.response)) push(id, Role::kResp);
  push(model::Vocab::kEos, Role::kResp);
  return seq;
}

std::vector<RoleSpan> role_spans(std::span<const Role> roles) {
  std::vector<RoleSpan> spans;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (spans.empty() || spans.back().role != roles[i]) {
      spans.push_back(RoleSpan{roles[i], i, i + 1});
    } else {
      spans.back().end = i + 1;
    }
  }
  return spans;
}

std::optional<std::vector<Role>> parse_roles(std::span<const int> tokens, const SegmentSchema& schema,
                                             const model::Vocab& vocab) {
  std::vector<Role> order;
  for (auto r : kRoleOrder) {
    if (schema.includes(r)) order.push_back(r);
  }
  std::vector<int> markers;
  for (auto r : order) markers.push_back(marker_id(schema, r, vocab));

  std::vector<Role> roles;
  roles.reserve(tokens.size());
  std::size_t next = 0;  // index into `order` of the next expected marker
  for (int id : tokens) {
    if (next < markers.size() && id == markers[next]) {
      ++next;
    } else if (next == 0 || vocab.is_special(id)) {
      // Every token must follow a marker; stray markers or out-of-order
      // roles are not a valid linearization. Labels and <eos> are fine.
      const bool label_or_eos = vocab.user_emotion_of(id) || vocab.strategy_of(id) ||
                                vocab.system_emotion_of(id) || id == model::Vocab::kEos ||
                                id == model::Vocab::kUnk;
      if (next == 0 || !label_or_eos) return std::nullopt;
    }
    roles.push_back(order[next - 1]);
  }
  if (next != order.size()) return std::nullopt;
  return roles;
}

}  // namespace smes::reasoning
