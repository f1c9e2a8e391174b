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

#include "xmix/nn/adam.hpp"

#include <cmath>

#include "xmix/error.hpp"
#include "xmix/simd/kernels.hpp"

namespace xmix {

AdamState AdamState::for_params(const MlpParams& params) {
  return AdamState{std::vector<double>(params.size(), 0.0),
                   std::vector<double>(params.size(), 0.0), 0};
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
               double lr, const AdamHyper& hyper) {
  if (!grads.same_shape(params) || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw PreconditionError("adam_step: shape mismatch");
  }
  if (!grads.all_finite()) throw NumericError("adam_step: non-finite gradient");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(hyper.beta1, t);
  const double bias2 = 1.0 - std::pow(hyper.beta2, t);
  simd::active().adam(params.flat().data(), grads.flat().data(),
                      state.m.data(), state.v.data(), params.size(), lr,
                      hyper.beta1, hyper.beta2, hyper.eps, bias1, bias2);
}

}  // namespace xmix
