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

// smes: corpus, training, evaluation and serving commands.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "smes/corpus/agreement.hpp"
#include "smes/corpus/io.hpp"
#include "smes/corpus/stats.hpp"
#include "smes/cues/backend.hpp"
#include "smes/error.hpp"
#include "smes/eval/ablation.hpp"
#include "smes/eval/evaluate.hpp"
#include "smes/model/checkpoint.hpp"
#include "smes/model/generators.hpp"
#include "smes/model/trainer.hpp"
#include "smes/reasoning/examples.hpp"
#include "smes/service/server.hpp"
#include "smes/service/session.hpp"
#include "smes/util/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCueUrlEnv = "SMES_CUE_URL";

struct Common {
  std::string corpus;
  std::string scenarios;
  std::string checkpoint;
  std::string generator;
  std::vector<std::string> schema;
  std::string variant = "baseline";
  std::uint64_t seed = 17;
  std::string out;
  std::string cue = "auto";  // auto | mock | none | external | cached:DIR
};

struct TrainFlags {
  int epochs = 20;
  int batch_size = 8;
  double lr = 3e-4;
  int d_model = 64;
  int n_heads = 4;
  int n_enc_layers = 2;
  int n_dec_layers = 2;
  int ff_dim = 128;
  int context_len = 128;
  double dropout = 0.0;
};

int fail(const std::string& kind, const std::string& message, int code = 1) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
  return code;
}

smes::corpus::ParseOptions parse_options(const Common& c) {
  smes::corpus::ParseOptions o;
  if (!c.scenarios.empty()) o.scenarios = smes::corpus::ScenarioRegistry::from_file(c.scenarios);
  return o;
}

smes::corpus::Corpus load(const Common& c, const std::string& positional = {}) {
  const std::string path = positional.empty() ? c.corpus : positional;
  if (path.empty()) throw smes::Error("missing_flag", "a corpus path is required (--corpus PATH)");
  return smes::corpus::load_corpus(path, parse_options(c));
}

std::shared_ptr<const smes::cues::CueBackend> cue_backend(const Common& c) {
  std::string mode = c.cue;
  const char* url = std::getenv(kCueUrlEnv);
  if (mode == "auto") mode = (url != nullptr && *url != '\0') ? "external" : "mock";
  if (mode == "mock") return std::make_shared<smes::cues::MockCueBackend>();
  if (mode == "none") return nullptr;
  if (mode == "external") {
    if (url == nullptr || *url == '\0') {
      throw smes::Error("missing_flag", std::string("--cue external needs ") + kCueUrlEnv);
    }
    return std::make_shared<smes::cues::ExternalCueBackend>(smes::cues::ExternalCueConfig{url});
  }
  if (mode.rfind("cached:", 0) == 0) {
    std::shared_ptr<const smes::cues::CueBackend> fallback;
    if (url != nullptr && *url != '\0') {
      fallback = std::make_shared<smes::cues::ExternalCueBackend>(smes::cues::ExternalCueConfig{url});
    }
    return std::make_shared<smes::cues::CachedCueBackend>(mode.substr(7), fallback == nullptr, fallback);
  }
  throw smes::Error("invalid_flag", "unknown cue backend '" + c.cue + "'");
}

// Backend that never has an answer; used where cues are disabled.
class NoCueBackend final : public smes::cues::CueBackend {
 public:
  smes::cues::BackendKind kind() const override { return smes::cues::BackendKind::kNone; }
  std::string answer(const smes::cues::CuePrompt&) const override {
    throw smes::cues::CueError("cue_unavailable", kind(), "cue extraction is disabled");
  }
};

std::shared_ptr<const smes::cues::CueBackend> cue_backend_or_none(const Common& c) {
  auto b = cue_backend(c);
  if (b) return b;
  return std::make_shared<NoCueBackend>();
}

smes::reasoning::SegmentSchema schema_for(const Common& c, smes::reasoning::SegmentSchema base = {}) {
  auto s = smes::reasoning::apply_ablation(base, c.variant);
  for (const auto& o : c.schema) smes::reasoning::apply_schema_override(s, o);
  s.validate();
  return s;
}

struct LoadedGenerator {
  std::shared_ptr<smes::reasoning::Generator> generator;
  smes::reasoning::SegmentSchema schema;
  std::size_t history_budget = 256;
};

LoadedGenerator open(const Common& c, const smes::corpus::Corpus* corpus) {
  LoadedGenerator g;
  if (!c.checkpoint.empty()) {
    const auto ck = smes::model::load_checkpoint(fs::path(c.checkpoint));
    g.generator = std::make_shared<smes::model::TransformerGenerator>(ck);
    g.history_budget = static_cast<std::size_t>(ck.config.context_len);
    g.schema = ck.schema;
    for (const auto& o : c.schema) smes::reasoning::apply_schema_override(g.schema, o);
    g.schema.validate();
    return g;
  }
  if (c.generator.empty()) throw smes::Error("missing_flag", "--checkpoint or --generator is required");
  std::vector<std::string> texts;
  if (corpus != nullptr) {
    for (const auto& d : corpus->dialogues) {
      for (const auto& t : d.turns) texts.push_back(t.utterance);
    }
  }
  g.generator = smes::model::open_generator(c.generator, texts);
  g.schema = schema_for(c);
  return g;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw smes::Error("io_error", "cannot write " + path.string());
  out << text;
}

// Prints to stdout, and to DIR/name when --out is set.
void emit(const Common& c, const std::string& name, const std::string& text) {
  std::cout << text;
  if (!c.out.empty()) write_file(fs::path(c.out) / name, text);
}

smes::model::ModelConfig model_config(const TrainFlags& t, std::uint64_t seed) {
  smes::model::ModelConfig m;
  m.d_model = t.d_model;
  m.n_heads = t.n_heads;
  m.n_enc_layers = t.n_enc_layers;
  m.n_dec_layers = t.n_dec_layers;
  m.ff_dim = t.ff_dim;
  m.context_len = t.context_len;
  m.dropout = t.dropout;
  m.seed = seed;
  return m;
}

smes::model::OptimizerConfig optimizer_config(const TrainFlags& t) {
  smes::model::OptimizerConfig o;
  o.epochs = t.epochs;
  o.batch_size = t.batch_size;
  o.lr = t.lr;
  return o;
}

void add_train_flags(CLI::App* app, TrainFlags& t) {
  app->add_option("--epochs", t.epochs, "Training epochs");
  app->add_option("--batch-size", t.batch_size, "Sequences per optimizer step");
  app->add_option("--lr", t.lr, "Learning rate");
  app->add_option("--d-model", t.d_model);
  app->add_option("--heads", t.n_heads);
  app->add_option("--enc-layers", t.n_enc_layers);
  app->add_option("--dec-layers", t.n_dec_layers);
  app->add_option("--ff-dim", t.ff_dim);
  app->add_option("--context-len", t.context_len, "History token budget");
  app->add_option("--dropout", t.dropout);
}

// A history file line: {"turns": [{"speaker", "utterance", "clips"?,
// "emotion"?, "strategy"?}, ...]} ending with a client turn.
smes::reasoning::History history_from_json(const json& doc, const smes::cues::CueBackend& cues,
                                           const smes::reasoning::SegmentSchema& schema) {
  smes::reasoning::History h;
  int index = 0;
  for (const auto& t : doc.at("turns")) {
    ++index;
    const std::string speaker = t.at("speaker").get<std::string>();
    const std::string utterance = t.value("utterance", std::string{});
    if (speaker == "client") {
      smes::corpus::Turn turn;
      turn.index = index;
      turn.utterance = utterance;
      if (t.contains("clips")) {
        turn.clips = smes::service::turn_request_from_json({{"clips", t.at("clips")}}).clips;
      }
      h.append_context(index, smes::reasoning::context_for_turn(turn, cues, schema));
    } else if (speaker == "therapist") {
      smes::reasoning::ResponseRecord r{utterance, {}, {}};
      if (t.contains("emotion")) r.emotion = smes::parse_emotion(t.at("emotion").get<std::string>());
      if (t.contains("strategy")) r.strategy = smes::parse_strategy(t.at("strategy").get<std::string>());
      h.append_response(index, std::move(r));
    } else {
      throw smes::Error("unknown_speaker", "unknown speaker '" + speaker + "'");
    }
  }
  return h;
}

std::string stage_line(const smes::reasoning::PipelineOutput& o) {
  std::ostringstream os;
  os << "E_t=" << smes::to_string(o.user_emotion) << "  S_t=" << smes::to_string(o.strategy)
     << "  SE_t=" << smes::to_string(o.system_emotion);
  return os.str();
}

volatile std::sig_atomic_t g_stop = 0;
smes::service::ApiServer* g_server = nullptr;

void on_signal(int) {
  g_stop = 1;
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smes: multimodal emotional-support pipeline toolkit"};
  app.require_subcommand(1);
  Common c;
  TrainFlags tf;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--corpus", c.corpus, "Corpus file (.jsonl)");
    sub->add_option("--scenarios", c.scenarios, "Scenario registry file");
    sub->add_option("--schema", c.schema, "Schema override KEY=VAL (repeatable)");
    sub->add_option("--variant", c.variant, "Ablation variant");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--cue", c.cue, "Cue backend: auto|mock|none|external|cached:DIR");
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--checkpoint", c.checkpoint, "Trained checkpoint");
    sub->add_option("--generator", c.generator, "Generator source (stub:..., http://...)");
  };

  std::string positional;
  int buckets = 4;
  auto* validate = app.add_subcommand("validate", "Validate a corpus file");
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  auto* phase = app.add_subcommand("phase", "Strategy distribution over conversation phases");
  auto* kappa = app.add_subcommand("kappa", "Inter-annotator agreement");
  for (auto* sub : {validate, stats, phase, kappa}) {
    sub->add_option("corpus_path", positional, "Corpus file");
    add_common(sub);
  }
  phase->add_option("--buckets", buckets, "Number of phase buckets");

  auto* train = app.add_subcommand("train", "Train a model on a corpus");
  add_common(train);
  add_train_flags(train, tf);

  std::string histories;
  auto* generate = app.add_subcommand("generate", "Run the pipeline on a file of histories");
  add_common(generate);
  add_model(generate);
  generate->add_option("--histories", histories, "JSON-lines file of histories")->required();

  bool with_bertscore = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score a model on a corpus");
  add_common(evaluate);
  add_model(evaluate);
  evaluate->add_flag("--bertscore", with_bertscore, "Include BERTScore (hashed n-gram provider)");

  std::vector<std::string> variants{"baseline", "-video", "-text", "-emotion", "-strategy"};
  std::string eval_corpus;
  bool parallel = false;
  auto* ablate = app.add_subcommand("ablate", "Train and compare ablation variants");
  add_common(ablate);
  add_train_flags(ablate, tf);
  ablate->add_option("--variants", variants, "Comma-separated variants")->delimiter(',');
  ablate->add_option("--eval-corpus", eval_corpus, "Evaluation corpus (defaults to --corpus)");
  ablate->add_flag("--parallel", parallel, "Run variants concurrently");

  auto* chat = app.add_subcommand("chat", "Interactive terminal session");
  add_common(chat);
  add_model(chat);

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string transcript;
  std::string cue_policy = "proceed";
  auto* serve = app.add_subcommand("serve", "Start the session API");
  add_common(serve);
  add_model(serve);
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--transcript", transcript, "Append-only transcript log");
  serve->add_option("--cue-failure", cue_policy, "proceed|fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what(), 2);
  }

  try {
    if (validate->parsed()) {
      const auto corpus = load(c, positional);
      std::size_t turns = 0;
      for (const auto& d : corpus.dialogues) turns += d.turns.size();
      std::cout << json{{"dialogues", corpus.dialogues.size()},
                        {"split", std::string(smes::corpus::to_string(corpus.split))},
                        {"status", "ok"},
                        {"turns", turns}}
                       .dump()
                << '\n';
      return 0;
    }
    if (stats->parsed()) {
      const auto corpus = load(c, positional);
      emit(c, "stats.json", smes::util::canonical_dump(smes::corpus::stats_report(smes::corpus::compute_stats(corpus))));
      return 0;
    }
    if (phase->parsed()) {
      const auto corpus = load(c, positional);
      emit(c, "phase.json",
           smes::util::canonical_dump(smes::corpus::phase_report(smes::corpus::strategy_phase_distribution(corpus, buckets))));
      return 0;
    }
    if (kappa->parsed()) {
      const auto corpus = load(c, positional);
      emit(c, "kappa.json",
           smes::util::canonical_dump(smes::corpus::agreement_report_json(smes::corpus::agreement_report(corpus))));
      return 0;
    }
    if (train->parsed()) {
      if (c.out.empty()) throw smes::Error("missing_flag", "train needs --out DIR");
      const auto corpus = load(c);
      const auto cues = cue_backend_or_none(c);
      const auto schema = schema_for(c);
      smes::model::TrainOptions opt;
      opt.optimizer = optimizer_config(tf);
      opt.on_epoch = [](int epoch, double loss, const smes::model::Checkpoint&) {
        std::cerr << json{{"epoch", epoch}, {"loss", loss}}.dump() << '\n';
        return true;
      };
      const auto result = smes::model::train(corpus, *cues, schema, model_config(tf, c.seed), opt);
      fs::create_directories(c.out);
      smes::model::save_checkpoint(result.checkpoint, fs::path(c.out) / "model.ckpt");
      std::ofstream csv(fs::path(c.out) / "loss_curve.csv");
      smes::model::write_loss_curve_csv(csv, result.loss_curve);
      std::cout << json{{"checkpoint", (fs::path(c.out) / "model.ckpt").string()},
                        {"epochs", result.checkpoint.metadata.epochs},
                        {"final_loss", result.checkpoint.metadata.final_loss},
                        {"parameters", result.checkpoint.model->parameter_count()},
                        {"vocab_size", result.checkpoint.vocab.size()}}
                       .dump()
                << '\n';
      return 0;
    }
    if (generate->parsed()) {
      const auto cues = cue_backend_or_none(c);
      std::unique_ptr<smes::corpus::Corpus> corpus;
      if (!c.corpus.empty()) corpus = std::make_unique<smes::corpus::Corpus>(load(c));
      const auto g = open(c, corpus.get());
      std::ifstream in(histories);
      if (!in) throw smes::Error("io_error", "cannot open " + histories);
      smes::reasoning::DecodeConfig decode;
      decode.seed = c.seed;
      decode.history_budget = g.history_budget;
      std::ostringstream lines;
      std::string line;
      while (std::getline(in, line)) {
        if (smes::util::trim(line).empty()) continue;
        const auto h = history_from_json(json::parse(line), *cues, g.schema);
        lines << smes::reasoning::to_json(smes::reasoning::sequential_generate(*g.generator, h, g.schema, decode)).dump()
              << '\n';
      }
      emit(c, "outputs.jsonl", lines.str());
      return 0;
    }
    if (evaluate->parsed()) {
      const auto corpus = load(c);
      const auto cues = cue_backend_or_none(c);
      const auto g = open(c, &corpus);
      const auto examples = smes::reasoning::build_examples(corpus, *cues, g.schema);
      smes::eval::HashedNgramEmbedder embedder;
      smes::eval::EvaluateOptions eo;
      eo.decode.seed = c.seed;
      eo.decode.history_budget = g.history_budget;
      if (with_bertscore) eo.embedder = &embedder;
      emit(c, "evaluation.json",
           smes::util::canonical_dump(smes::eval::to_json(smes::eval::evaluate(*g.generator, examples, g.schema, eo))));
      return 0;
    }
    if (ablate->parsed()) {
      const auto corpus = load(c);
      const auto evaluation = eval_corpus.empty() ? corpus : smes::corpus::load_corpus(eval_corpus, parse_options(c));
      const auto cues = cue_backend_or_none(c);
      smes::eval::AblationConfig cfg;
      cfg.model = model_config(tf, c.seed);
      cfg.training.optimizer = optimizer_config(tf);
      cfg.base_schema = {};
      for (const auto& o : c.schema) smes::reasoning::apply_schema_override(cfg.base_schema, o);
      cfg.decode.seed = c.seed;
      cfg.parallel = parallel;
      const auto reports = smes::eval::run_ablation(variants, corpus, evaluation, *cues, cfg);
      std::cout << smes::eval::render_ablation_table(reports);
      if (!c.out.empty()) {
        write_file(fs::path(c.out) / "ablation.json", smes::util::canonical_dump(smes::eval::to_json(reports)));
        write_file(fs::path(c.out) / "ablation.md", smes::eval::render_ablation_table(reports));
      }
      return 0;
    }
    if (chat->parsed()) {
      std::unique_ptr<smes::corpus::Corpus> corpus;
      if (!c.corpus.empty()) corpus = std::make_unique<smes::corpus::Corpus>(load(c));
      auto g = open(c, corpus.get());
      smes::service::ManagerOptions mo;
      mo.base_schema = g.schema;
      mo.history_budget = g.history_budget;
      smes::service::SessionManager sessions(g.generator, cue_backend(c), mo);
      smes::service::SessionConfig sc;
      sc.decode.seed = c.seed;
      const auto id = sessions.create_session(sc);
      std::cout << "session " << id << " (empty line or EOF to quit)\n> " << std::flush;
      std::string line;
      while (std::getline(std::cin, line) && !smes::util::trim(line).empty()) {
        try {
          const auto out = sessions.post_turn(id, {line, {}});
          std::cout << "  [" << stage_line(out) << "]\n  " << out.response << "\n> " << std::flush;
        } catch (const smes::Error& e) {
          std::cerr << json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump() << "\n> " << std::flush;
        }
      }
      return 0;
    }
    if (serve->parsed()) {
      std::unique_ptr<smes::corpus::Corpus> corpus;
      if (!c.corpus.empty()) corpus = std::make_unique<smes::corpus::Corpus>(load(c));
      auto g = open(c, corpus.get());
      smes::service::ManagerOptions mo;
      mo.base_schema = g.schema;
      mo.history_budget = g.history_budget;
      mo.transcript = transcript;
      if (cue_policy == "fail") {
        mo.cue_failure = smes::service::CueFailurePolicy::kFail;
      } else if (cue_policy != "proceed") {
        throw smes::Error("invalid_flag", "--cue-failure must be proceed or fail");
      }
      smes::service::SessionManager sessions(g.generator, cue_backend(c), mo);
      smes::service::ApiServer server(sessions);
      const int bound = server.bind(host, port);
      if (bound < 0) throw smes::Error("io_error", "cannot bind " + host + ":" + std::to_string(port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << json{{"host", host}, {"port", bound}, {"status", "listening"}}.dump() << std::endl;
      server.serve();
      g_server = nullptr;
      return 0;
    }
  } catch (const smes::corpus::CorpusError& e) {
    std::cerr << json{{"error", {{"kind", e.kind()}, {"location", e.where().describe()}, {"message", e.what()}}}}.dump()
              << '\n';
    return 1;
  } catch (const smes::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const json::exception& e) {
    return fail("malformed_input", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return 0;
}
