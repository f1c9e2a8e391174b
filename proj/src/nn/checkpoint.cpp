// Copyright 2026 The expertmix Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xmix/nn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "xmix/error.hpp"

namespace xmix {

std::string params_to_json(const MlpParams& params) {
  nlohmann::ordered_json doc;
  doc["format"] = "xmix-mlp";
  doc["version"] = kCheckpointVersion;
  doc["activation"] = "tanh";
  doc["dims"] = params.dims();
  doc["layers"] = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    const auto w = params.weights(l);
    const auto b = params.bias(l);
    doc["layers"].push_back(
        {{"shape", {params.dims()[l + 1], params.dims()[l]}},
         {"weights", std::vector<double>(w.begin(), w.end())},
         {"bias", std::vector<double>(b.begin(), b.end())}});
  }
  return doc.dump();
}

MlpParams params_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("checkpoint parse failure: ") + e.what());
  }
  if (doc.value("format", "") != "xmix-mlp") {
    throw FormatError("checkpoint: unexpected format tag");
  }
  if (doc.value("version", 0) != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version");
  }
  MlpParams params(doc.at("dims").get<std::vector<std::size_t>>());
  const auto& layers = doc.at("layers");
  if (layers.size() != params.layer_count()) {
    throw FormatError("checkpoint: layer count does not match dims");
  }
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    const auto w = layers[l].at("weights").get<std::vector<double>>();
    const auto b = layers[l].at("bias").get<std::vector<double>>();
    auto pw = params.weights(l);
    auto pb = params.bias(l);
    if (w.size() != pw.size() || b.size() != pb.size()) {
      throw FormatError("checkpoint: tensor size mismatch in layer " +
                        std::to_string(l));
    }
    std::copy(w.begin(), w.end(), pw.begin());
    std::copy(b.begin(), b.end(), pb.begin());
  }
  return params;
}

void save_params(const MlpParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint: " + path);
  out << params_to_json(params);
}

MlpParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

}  // namespace xmix
