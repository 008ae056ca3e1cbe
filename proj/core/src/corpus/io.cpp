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

#include "smes/corpus/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "smes/util/util.hpp"

namespace smes::corpus {
namespace {

using nlohmann::json;

constexpr std::string_view kSchemaPrefix = "#mesc-schema:";
constexpr std::string_view kSplitPrefix = "#split:";

[[noreturn]] void fail(std::string kind, const std::string& message, Location where) {
  throw CorpusError(std::move(kind), message, std::move(where));
}

// Decoding context: the location is refined as we descend.
struct Cursor {
  Location where;

  Cursor field(std::string name) const {
    Cursor c = *this;
    c.where.field = where.field.empty() ? std::move(name) : where.field + "." + name;
    return c;
  }
  Cursor turn(int index) const {
    Cursor c = *this;
    c.where.turn_index = index;
    c.where.field.clear();
    return c;
  }
};

void check_keys(const json& obj, std::initializer_list<std::string_view> required,
                std::initializer_list<std::string_view> optional, const Cursor& at) {
  if (!obj.is_object()) fail("malformed_record", "expected an object", at.where);
  for (auto key : required) {
    if (!obj.contains(key)) fail("missing_field", "missing field '" + std::string(key) + "'", at.field(std::string(key)).where);
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto k : required) known = known || key == k;
    for (auto k : optional) known = known || key == k;
    if (!known) fail("unknown_field", "unknown field '" + key + "'", at.field(key).where);
  }
}

const std::string& get_string(const json& obj, const char* key, const Cursor& at) {
  const auto& v = obj.at(key);
  if (!v.is_string()) fail("malformed_record", std::string("field '") + key + "' must be a string", at.field(key).where);
  return v.get_ref<const std::string&>();
}

double get_number(const json& obj, const char* key, const Cursor& at) {
  const auto& v = obj.at(key);
  if (!v.is_number()) fail("malformed_record", std::string("field '") + key + "' must be a number", at.field(key).where);
  return v.get<double>();
}

Emotion decode_emotion(const json& obj, const Cursor& at) {
  const auto& name = get_string(obj, "emotion", at);
  auto e = parse_emotion(name);
  if (!e) fail("unknown_emotion_label", "unknown emotion label '" + name + "'", at.field("emotion").where);
  return *e;
}

std::optional<Strategy> decode_strategy(const json& obj, const Cursor& at) {
  if (!obj.contains("strategy")) return std::nullopt;
  const auto& name = get_string(obj, "strategy", at);
  auto s = parse_strategy(name);
  if (!s) fail("unknown_strategy_label", "unknown strategy label '" + name + "'", at.field("strategy").where);
  return s;
}

ClipRef decode_clip(const json& obj, const Cursor& at) {
  check_keys(obj, {"media_id", "start_s", "end_s", "kind"}, {}, at);
  ClipRef clip;
  clip.media_id = get_string(obj, "media_id", at);
  clip.start_s = get_number(obj, "start_s", at);
  clip.end_s = get_number(obj, "end_s", at);
  const auto& kind = get_string(obj, "kind", at);
  auto k = parse_clip_kind(kind);
  if (!k) fail("unknown_clip_kind", "unknown clip kind '" + kind + "'", at.field("kind").where);
  clip.kind = *k;
  return clip;
}

Turn decode_turn(const json& obj, const Cursor& dialogue_at, std::size_t position) {
  Cursor at = dialogue_at.turn(static_cast<int>(position + 1));
  check_keys(obj, {"index", "speaker", "utterance", "emotion"}, {"strategy", "clips", "raw_annotations"}, at);
  Turn t;
  const auto& idx = obj.at("index");
  if (!idx.is_number_integer()) fail("malformed_record", "field 'index' must be an integer", at.field("index").where);
  t.index = idx.get<int>();
  at = dialogue_at.turn(t.index);

  const auto& speaker = get_string(obj, "speaker", at);
  auto sp = parse_speaker(speaker);
  if (!sp) fail("unknown_speaker", "unknown speaker '" + speaker + "'", at.field("speaker").where);
  t.speaker = *sp;
  t.utterance = get_string(obj, "utterance", at);
  t.emotion = decode_emotion(obj, at);
  t.strategy = decode_strategy(obj, at);

  if (obj.contains("clips")) {
    const auto& clips = obj.at("clips");
    if (!clips.is_array()) fail("malformed_record", "field 'clips' must be an array", at.field("clips").where);
    for (std::size_t i = 0; i < clips.size(); ++i) {
      t.clips.push_back(decode_clip(clips[i], at.field("clips[" + std::to_string(i) + "]")));
    }
  }
  if (obj.contains("raw_annotations")) {
    const auto& raw = obj.at("raw_annotations");
    Cursor raw_at = at.field("raw_annotations");
    if (!raw.is_object()) fail("malformed_record", "field 'raw_annotations' must be an object", raw_at.where);
    std::map<std::string, Annotation> anns;
    for (const auto& [annotator, value] : raw.items()) {
      Cursor a_at = raw_at.field(annotator);
      check_keys(value, {"emotion"}, {"strategy"}, a_at);
      anns[annotator] = Annotation{decode_emotion(value, a_at), decode_strategy(value, a_at)};
    }
    t.raw_annotations = std::move(anns);
  }
  return t;
}

Dialogue decode_dialogue(const json& obj, std::size_t line) {
  Cursor at{Location{line, {}, 0, {}}};
  if (obj.is_object() && obj.contains("id") && obj.at("id").is_string()) {
    at.where.dialogue_id = obj.at("id").get<std::string>();
  }
  check_keys(obj, {"id", "scenario", "turns"}, {}, at);
  Dialogue d;
  d.id = get_string(obj, "id", at);
  d.scenario = get_string(obj, "scenario", at);
  const auto& turns = obj.at("turns");
  if (!turns.is_array()) fail("malformed_record", "field 'turns' must be an array", at.field("turns").where);
  d.turns.reserve(turns.size());
  for (std::size_t i = 0; i < turns.size(); ++i) d.turns.push_back(decode_turn(turns[i], at, i));
  return d;
}

json encode_annotation(const Annotation& a) {
  json j;
  j["emotion"] = to_string(a.emotion);
  if (a.strategy) j["strategy"] = to_string(*a.strategy);
  return j;
}

json encode_dialogue(const Dialogue& d) {
  json turns = json::array();
  for (const auto& t : d.turns) {
    json jt;
    jt["index"] = t.index;
    jt["speaker"] = to_string(t.speaker);
    jt["utterance"] = t.utterance;
    jt["emotion"] = to_string(t.emotion);
    if (t.strategy) jt["strategy"] = to_string(*t.strategy);
    json clips = json::array();
    for (const auto& c : t.clips) {
      clips.push_back({{"media_id", c.media_id},
                       {"start_s", c.start_s},
                       {"end_s", c.end_s},
                       {"kind", to_string(c.kind)}});
    }
    jt["clips"] = std::move(clips);
    if (t.raw_annotations) {
      json raw = json::object();
      for (const auto& [annotator, a] : *t.raw_annotations) raw[annotator] = encode_annotation(a);
      jt["raw_annotations"] = std::move(raw);
    }
    turns.push_back(std::move(jt));
  }
  return {{"id", d.id}, {"scenario", d.scenario}, {"turns", std::move(turns)}};
}

void check_strategy_presence(Speaker speaker, const std::optional<Strategy>& strategy,
                             const Location& where) {
  if (speaker == Speaker::kClient && strategy) {
    fail("strategy_on_client_turn", "strategy on client turn", where);
  }
  if (speaker == Speaker::kTherapist && !strategy) {
    fail("missing_therapist_strategy", "therapist turn without strategy", where);
  }
}

}  // namespace

void validate_dialogue(const Dialogue& d, const ScenarioRegistry& scenarios, std::size_t line) {
  Location base{line, d.id, 0, {}};
  auto at = [&](int turn, std::string field) {
    Location l = base;
    l.turn_index = turn;
    l.field = std::move(field);
    return l;
  };

  if (d.id.empty()) fail("empty_dialogue_id", "dialogue id is empty", at(0, "id"));
  if (!scenarios.contains(d.scenario)) {
    fail("unknown_scenario", "unknown scenario '" + d.scenario + "'", at(0, "scenario"));
  }
  if (d.turns.size() < 2) fail("too_few_turns", "dialogue needs at least two turns", at(0, "turns"));

  bool has_client = false, has_therapist = false;
  // Latest clip start per (media, kind); alignment requires it never goes back.
  std::map<std::pair<std::string, ClipKind>, double> last_start;

  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    const Turn& t = d.turns[i];
    const int expected = static_cast<int>(i + 1);
    if (t.index != expected) {
      fail("non_consecutive_turn_index",
           "turn index " + std::to_string(t.index) + " where " + std::to_string(expected) + " was expected",
           at(t.index, "index"));
    }
    has_client = has_client || t.speaker == Speaker::kClient;
    has_therapist = has_therapist || t.speaker == Speaker::kTherapist;

    if (util::trim(t.utterance).empty()) fail("empty_utterance", "utterance is empty", at(t.index, "utterance"));
    check_strategy_presence(t.speaker, t.strategy, at(t.index, "strategy"));

    for (std::size_t c = 0; c < t.clips.size(); ++c) {
      const ClipRef& clip = t.clips[c];
      const std::string field = "clips[" + std::to_string(c) + "]";
      if (clip.media_id.empty()) fail("malformed_record", "clip media_id is empty", at(t.index, field + ".media_id"));
      if (!std::isfinite(clip.start_s) || !std::isfinite(clip.end_s) || clip.start_s < 0.0) {
        fail("invalid_clip_time", "clip times must be finite and non-negative", at(t.index, field));
      }
      if (clip.end_s <= clip.start_s) {
        fail("non_monotone_clip_times", "clip end_s must exceed start_s", at(t.index, field));
      }
      auto key = std::make_pair(clip.media_id, clip.kind);
      auto it = last_start.find(key);
      if (it != last_start.end() && clip.start_s < it->second) {
        fail("non_monotone_clip_times", "clip starts before an earlier turn's clip on the same media",
             at(t.index, field));
      }
      last_start[key] = clip.start_s;
    }

    if (t.raw_annotations) {
      for (const auto& [annotator, a] : *t.raw_annotations) {
        const std::string field = "raw_annotations." + annotator;
        if (annotator.empty()) fail("malformed_record", "empty annotator id", at(t.index, "raw_annotations"));
        check_strategy_presence(t.speaker, a.strategy, at(t.index, field));
      }
    }
  }
  if (!has_client || !has_therapist) {
    fail("missing_speaker_role", "dialogue needs at least one client and one therapist turn", at(0, "turns"));
  }
}

void validate_corpus(const Corpus& corpus, const ScenarioRegistry& scenarios) {
  std::set<std::string> seen;
  for (const auto& d : corpus.dialogues) {
    validate_dialogue(d, scenarios);
    if (!seen.insert(d.id).second) {
      fail("duplicate_dialogue_id", "duplicate dialogue id '" + d.id + "'", Location{0, d.id, 0, "id"});
    }
  }
}

Corpus parse_corpus(std::istream& in, const ParseOptions& options) {
  Corpus corpus;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  bool records_started = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line.rfind(kSchemaPrefix, 0) != 0) {
        fail("bad_schema_header", "first line must be '#mesc-schema:<version>'", Location{line_no, {}, 0, {}});
      }
      const std::string version = line.substr(kSchemaPrefix.size());
      if (version != options.schema_version) {
        fail("schema_version_mismatch",
             "schema version '" + version + "' but '" + options.schema_version + "' was requested",
             Location{line_no, {}, 0, {}});
      }
      header = true;
      continue;
    }
    if (util::trim(line).empty()) continue;
    if (line.front() == '#') {
      if (line.rfind(kSplitPrefix, 0) == 0) {
        if (records_started) fail("malformed_record", "split header after records", Location{line_no, {}, 0, {}});
        auto split = parse_split(line.substr(kSplitPrefix.size()));
        if (!split) fail("unknown_split", "unknown split in '" + line + "'", Location{line_no, {}, 0, {}});
        corpus.split = *split;
      }
      continue;
    }
    records_started = true;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      fail("malformed_record", std::string("malformed record: ") + e.what(), Location{line_no, {}, 0, {}});
    }
    Dialogue d = decode_dialogue(record, line_no);
    validate_dialogue(d, options.scenarios, line_no);
    if (!seen.insert(d.id).second) {
      fail("duplicate_dialogue_id", "duplicate dialogue id '" + d.id + "'", Location{line_no, d.id, 0, "id"});
    }
    corpus.dialogues.push_back(std::move(d));
  }
  if (!header) fail("bad_schema_header", "missing '#mesc-schema:<version>' header", Location{});
  return corpus;
}

Corpus load_corpus(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open corpus file: " + path);
  return parse_corpus(in, options);
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  out += kSchemaPrefix;
  out += kSchemaVersion;
  out += '\n';
  out += kSplitPrefix;
  out += to_string(corpus.split);
  out += '\n';
  for (const auto& d : corpus.dialogues) {
    out += encode_dialogue(d).dump();
    out += '\n';
  }
  return out;
}

}  // namespace smes::corpus
