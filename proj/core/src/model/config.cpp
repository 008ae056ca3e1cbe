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

#include "smes/model/config.hpp"

#include "smes/error.hpp"

namespace smes::model {

void ModelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw Error("invalid_model_config", std::string(name) + " must be positive");
  };
  positive(d_model, "d_model");
  positive(n_heads, "n_heads");
  positive(n_enc_layers, "n_enc_layers");
  positive(n_dec_layers, "n_dec_layers");
  positive(ff_dim, "ff_dim");
  positive(context_len, "context_len");
  if (d_model % n_heads != 0) throw Error("invalid_model_config", "d_model must be divisible by n_heads");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("invalid_model_config", "dropout must lie in [0, 1)");
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"context_len", c.context_len}, {"d_model", c.d_model},       {"dropout", c.dropout},
          {"ff_dim", c.ff_dim},           {"n_dec_layers", c.n_dec_layers}, {"n_enc_layers", c.n_enc_layers},
          {"n_heads", c.n_heads},         {"seed", c.seed}};
}

ModelConfig model_config_from_json(const nlohmann::json& doc) {
  ModelConfig c;
  try {
    c.context_len = doc.at("context_len").get<int>();
    c.d_model = doc.at("d_model").get<int>();
    c.dropout = doc.at("dropout").get<double>();
    c.ff_dim = doc.at("ff_dim").get<int>();
    c.n_dec_layers = doc.at("n_dec_layers").get<int>();
    c.n_enc_layers = doc.at("n_enc_layers").get<int>();
    c.n_heads = doc.at("n_heads").get<int>();
    c.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_model_config", std::string("malformed model config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace smes::model
