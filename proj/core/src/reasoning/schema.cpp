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

#include "smes/reasoning/schema.hpp"

#include <set>

#include "smes/error.hpp"

namespace smes::reasoning {

std::string_view to_string(LossPolicy p) {
  return p == LossPolicy::kTargetsOnly ? "targets_only" : "full_sequence";
}

std::optional<LossPolicy> parse_loss_policy(std::string_view name) {
  if (name == "targets_only") return LossPolicy::kTargetsOnly;
  if (name == "full_sequence") return LossPolicy::kFullSequence;
  return std::nullopt;
}

void SegmentSchema::validate() const {
  std::set<std::string> seen;
  for (auto r : kRoleOrder) {
    const auto& m = marker(r);
    if (m.empty()) throw Error("invalid_schema", "empty marker for role " + std::string(to_string(r)));
    if (!seen.insert(m).second) throw Error("invalid_schema", "marker '" + m + "' used by two roles");
  }
  if (!includes(Role::kResp)) throw Error("invalid_schema", "the RESP span cannot be excluded");
  if (!includes(Role::kHist)) throw Error("invalid_schema", "the HIST span cannot be excluded");
}

std::string_view to_string(Ablation a) {
  switch (a) {
    case Ablation::kBaseline: return "baseline";
    case Ablation::kNoVideo: return "-video";
    case Ablation::kNoText: return "-text";
    case Ablation::kNoEmotion: return "-emotion";
    case Ablation::kNoStrategy: return "-strategy";
  }
  return "baseline";
}

Ablation parse_ablation(std::string_view name) {
  for (auto a : kAllAblations) {
    if (to_string(a) == name) return a;
  }
  if (name == "-response" || name == "-resp" || name == "-RESP") {
    throw Error("invalid_ablation", "the response span cannot be removed");
  }
  throw Error("unknown_variant", "unknown ablation variant '" + std::string(name) + "'");
}

SegmentSchema apply_ablation(SegmentSchema schema, Ablation variant) {
  switch (variant) {
    case Ablation::kBaseline: break;
    case Ablation::kNoVideo: schema.composition.include_cue = false; break;
    case Ablation::kNoText: schema.composition.include_utterance = false; break;
    case Ablation::kNoEmotion: schema.include[index_of(Role::kUsrEmo)] = false; break;
    case Ablation::kNoStrategy: schema.include[index_of(Role::kStrat)] = false; break;
  }
  schema.validate();
  return schema;
}

SegmentSchema apply_ablation(SegmentSchema schema, std::string_view variant) {
  return apply_ablation(std::move(schema), parse_ablation(variant));
}

namespace {

bool parse_flag(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw Error("invalid_schema_override", "expected 0/1 for '" + std::string(key) + "'");
}

}  // namespace

void apply_schema_override(SegmentSchema& schema, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error("invalid_schema_override", "expected KEY=VAL, got '" + std::string(assignment) + "'");
  }
  const auto key = assignment.substr(0, eq);
  const auto value = assignment.substr(eq + 1);
  auto role_after = [&](std::string_view prefix) -> std::optional<Role> {
    if (key.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto r = parse_role(key.substr(prefix.size()));
    if (!r) throw Error("invalid_schema_override", "unknown role in '" + std::string(key) + "'");
    return r;
  };

  if (key == "loss") {
    auto p = parse_loss_policy(value);
    if (!p) throw Error("invalid_schema_override", "unknown loss policy '" + std::string(value) + "'");
    schema.loss_policy = *p;
  } else if (key == "cue") {
    schema.composition.include_cue = parse_flag(key, value);
  } else if (key == "utterance") {
    schema.composition.include_utterance = parse_flag(key, value);
  } else if (auto r = role_after("include.")) {
    schema.include[index_of(*r)] = parse_flag(key, value);
  } else if (auto r = role_after("marker.")) {
    schema.markers[index_of(*r)] = std::string(value);
  } else {
    throw Error("invalid_schema_override", "unknown schema key '" + std::string(key) + "'");
  }
  schema.validate();
}

nlohmann::json to_json(const SegmentSchema& schema) {
  nlohmann::json include = nlohmann::json::object();
  nlohmann::json markers = nlohmann::json::object();
  for (auto r : kRoleOrder) {
    include[std::string(to_string(r))] = schema.includes(r);
    markers[std::string(to_string(r))] = schema.marker(r);
  }
  return {{"composition", {{"cue", schema.composition.include_cue}, {"utterance", schema.composition.include_utterance}}},
          {"include", include},
          {"loss", std::string(to_string(schema.loss_policy))},
          {"markers", markers}};
}

SegmentSchema segment_schema_from_json(const nlohmann::json& doc) {
  SegmentSchema s;
  try {
    for (auto r : kRoleOrder) {
      const std::string name(to_string(r));
      s.include[index_of(r)] = doc.at("include").at(name).get<bool>();
      s.markers[index_of(r)] = doc.at("markers").at(name).get<std::string>();
    }
    const auto policy = parse_loss_policy(doc.at("loss").get<std::string>());
    if (!policy) throw Error("invalid_schema", "unknown loss policy");
    s.loss_policy = *policy;
    s.composition.include_cue = doc.at("composition").at("cue").get<bool>();
    s.composition.include_utterance = doc.at("composition").at("utterance").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_schema", std::string("malformed schema record: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace smes::reasoning
