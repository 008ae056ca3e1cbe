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

#include "smes/model/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "smes/error.hpp"

namespace smes::model {
namespace {

constexpr char kMagic[8] = {'S', 'M', 'E', 'S', 'C', 'K', 'P', 'T'};

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error("checkpoint_format", "truncated checkpoint");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

nlohmann::json param_index(const Transformer& model) {
  nlohmann::json index = nlohmann::json::array();
  std::size_t offset = 0;
  model.for_each_param([&](const Param& p) {
    index.push_back({{"cols", p.value.cols()}, {"name", p.name}, {"offset", offset}, {"rows", p.value.rows()}});
    offset += static_cast<std::size_t>(p.size());
  });
  return index;
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, std::ostream& out) {
  if (!ck.model) throw Error("checkpoint_format", "checkpoint has no model");
  nlohmann::json header = {
      {"config", to_json(ck.config)},
      {"metadata",
       {{"epochs", ck.metadata.epochs}, {"final_loss", ck.metadata.final_loss}, {"loss_curve", ck.metadata.loss_curve}}},
      {"params", param_index(*ck.model)},
      {"schema", reasoning::to_json(ck.schema)},
      {"vocab", {{"digest", ck.vocab.digest()}, {"tokens", ck.vocab.tokens()}}},
  };
  const std::string text = header.dump();
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(out, kCheckpointVersion);
  write_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  ck.model->for_each_param([&](const Param& p) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i) write_le<double>(out, p.value.data()[i]);
  });
  if (!out) throw Error("io_error", "failed writing checkpoint");
}

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot open " + path.string() + " for writing");
  save_checkpoint(ck, out);
}

Checkpoint load_checkpoint(std::istream& in, const Vocab* expected_vocab) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("checkpoint_format", "not a checkpoint file");
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error("checkpoint_format", "unsupported checkpoint version " + std::to_string(version));
  }
  const auto length = read_le<std::uint64_t>(in);
  if (length > (std::uint64_t{1} << 32)) throw Error("checkpoint_format", "header too large");
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) throw Error("checkpoint_format", "truncated header");

  Checkpoint ck;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
    ck.config = model_config_from_json(header.at("config"));
    ck.schema = reasoning::segment_schema_from_json(header.at("schema"));
    ck.vocab = Vocab::from_tokens(header.at("vocab").at("tokens").get<std::vector<std::string>>());
    const auto& meta = header.at("metadata");
    ck.metadata.epochs = meta.at("epochs").get<int>();
    ck.metadata.final_loss = meta.at("final_loss").get<double>();
    ck.metadata.loss_curve = meta.at("loss_curve").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint_format", std::string("malformed header: ") + e.what());
  }
  const std::string stored_digest = header["vocab"].value("digest", "");
  if (stored_digest != ck.vocab.digest()) {
    throw Error("vocab_digest_mismatch", "stored vocabulary digest does not match its tokens");
  }
  if (expected_vocab != nullptr && expected_vocab->digest() != stored_digest) {
    throw Error("vocab_digest_mismatch", "checkpoint vocabulary differs from the vocabulary in use");
  }

  ck.model = std::make_shared<Transformer>(ck.config, ck.vocab.size());
  const nlohmann::json expected = param_index(*ck.model);
  if (header.at("params") != expected) {
    throw Error("checkpoint_shape_mismatch", "parameter index does not match the configured model");
  }
  ck.model->for_each_param([&](Param& p) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = read_le<double>(in);
  });
  ck.model->zero_grad();
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const Vocab* expected_vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open checkpoint " + path.string());
  return load_checkpoint(in, expected_vocab);
}

void write_loss_curve_csv(std::ostream& out, const std::vector<double>& curve) {
  out << "epoch,loss\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < curve.size(); ++i) out << (i + 1) << ',' << curve[i] << '\n';
  out.precision(old);
}

}  // namespace smes::model
