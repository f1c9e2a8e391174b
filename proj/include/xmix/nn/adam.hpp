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

#ifndef XMIX_NN_ADAM_HPP_
#define XMIX_NN_ADAM_HPP_

#include <cstdint>
#include <vector>

#include "xmix/nn/mlp.hpp"

namespace xmix {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;

  static AdamState for_params(const MlpParams& params);
  friend bool operator==(const AdamState&, const AdamState&) = default;
};

// One bias-corrected Adam update in place. Throws NumericError on a
// non-finite gradient (before touching any state) and PreconditionError on
// a shape mismatch.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
               double lr, const AdamHyper& hyper = {});

}  // namespace xmix

#endif  // XMIX_NN_ADAM_HPP_
