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

#include <fstream>

#include "xmix/error.hpp"
#include "xmix/harness/commands.hpp"
#include "xmix/rng.hpp"
#include "xmix/simd/kernels.hpp"

#ifndef XMIX_BUILD_ID
#define XMIX_BUILD_ID "unknown"
#endif

namespace xmix::harness {

std::string build_id() {
#ifdef XMIX_NO_EXPERT
  return std::string(XMIX_BUILD_ID) + "+no-expert";
#else
  return XMIX_BUILD_ID;
#endif
}

std::string graph_hash(const RoadGraph& graph) {
  return hex64(fnv1a(graph_to_json(graph)));
}

nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json doc;
  doc["format"] = "xmix-run";
  doc["version"] = 1;
  doc["build"] = m.build_id;
  doc["simd"] = m.simd;
  doc["config_hash"] = m.config_hash;
  doc["graph_hash"] = m.graph_hash;
  doc["seeds"] = m.seeds;
  doc["out_dir"] = m.out_dir;
  doc["config"] = m.config;
  return doc;
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "xmix-run") {
    throw FormatError("not a run manifest");
  }
  RunManifest m;
  try {
    m.build_id = doc.at("build").get<std::string>();
    m.simd = doc.at("simd").get<std::string>();
    m.config_hash = doc.at("config_hash").get<std::string>();
    m.graph_hash = doc.at("graph_hash").get<std::string>();
    m.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    m.out_dir = doc.at("out_dir").get<std::string>();
    m.config = doc.at("config");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("run manifest: ") + e.what());
  }
  return m;
}

RunManifest read_manifest(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "manifest.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("run manifest not found: " + path.string());
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw FormatError("run manifest is not JSON: " + path.string());
  return manifest_from_json(doc);
}

}  // namespace xmix::harness
