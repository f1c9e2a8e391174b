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

#ifndef XMIX_NN_CHECKPOINT_HPP_
#define XMIX_NN_CHECKPOINT_HPP_

#include <string>

#include "xmix/nn/mlp.hpp"

namespace xmix {

// Versioned JSON tensor format:
//   {"format":"xmix-mlp","version":1,"activation":"tanh",
//    "dims":[in,h1,h2,out],
//    "layers":[{"shape":[out,in],"weights":[...row-major...],"bias":[...]},...]}
// Doubles are written with round-trip precision.
inline constexpr int kCheckpointVersion = 1;

std::string params_to_json(const MlpParams& params);
MlpParams params_from_json(const std::string& text);

void save_params(const MlpParams& params, const std::string& path);
MlpParams load_params(const std::string& path);

}  // namespace xmix

#endif  // XMIX_NN_CHECKPOINT_HPP_
