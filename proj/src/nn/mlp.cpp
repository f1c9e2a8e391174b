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

#include "xmix/nn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xmix/error.hpp"
#include "xmix/simd/kernels.hpp"

namespace xmix {

MlpParams::MlpParams(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw PreconditionError("MlpParams: need >= 2 dims");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    if (dims_[l] == 0 || dims_[l + 1] == 0) {
      throw PreconditionError("MlpParams: zero-width layer");
    }
    offsets_.push_back(total);
    total += dims_[l + 1] * dims_[l] + dims_[l + 1];
  }
  data_.assign(total, 0.0);
}

std::span<double> MlpParams::weights(std::size_t layer) {
  return std::span<double>(data_).subspan(offsets_[layer],
                                          dims_[layer + 1] * dims_[layer]);
}
std::span<const double> MlpParams::weights(std::size_t layer) const {
  return std::span<const double>(data_).subspan(offsets_[layer],
                                                dims_[layer + 1] * dims_[layer]);
}
std::span<double> MlpParams::bias(std::size_t layer) {
  return std::span<double>(data_).subspan(
      offsets_[layer] + dims_[layer + 1] * dims_[layer], dims_[layer + 1]);
}
std::span<const double> MlpParams::bias(std::size_t layer) const {
  return std::span<const double>(data_).subspan(
      offsets_[layer] + dims_[layer + 1] * dims_[layer], dims_[layer + 1]);
}

bool MlpParams::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void MlpParams::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

MlpParams init_mlp(std::vector<std::size_t> dims, Rng& rng, bool zero_output) {
  MlpParams params(std::move(dims));
  const std::size_t layers = params.layer_count();
  for (std::size_t l = 0; l < layers; ++l) {
    const bool output = l + 1 == layers;
    if (output && zero_output) continue;
    const double fan_in = static_cast<double>(params.dims()[l]);
    const double limit = output ? std::sqrt(1.0 / fan_in) : std::sqrt(6.0 / fan_in);
    for (double& w : params.weights(l)) w = rng.uniform(-limit, limit);
  }
  return params;
}

void mlp_forward(const MlpParams& params, std::span<const double> input,
                 ForwardCache& cache) {
  if (input.size() != params.in_dim()) {
    throw PreconditionError("mlp_forward: input size " +
                            std::to_string(input.size()) + " != in_dim " +
                            std::to_string(params.in_dim()));
  }
  const auto& k = simd::active();
  const std::size_t layers = params.layer_count();
  cache.acts.resize(layers + 1);
  cache.acts[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t rows = params.dims()[l + 1];
    const std::size_t cols = params.dims()[l];
    auto& out = cache.acts[l + 1];
    out.resize(rows);
    k.gemv(params.weights(l).data(), rows, cols, cache.acts[l].data(),
           params.bias(l).data(), out.data());
    if (l + 1 < layers) {
      for (double& v : out) v = std::tanh(v);
    }
  }
}

std::vector<double> mlp_forward(const MlpParams& params,
                                std::span<const double> input) {
  ForwardCache cache;
  mlp_forward(params, input, cache);
  return std::move(cache.acts.back());
}

void mlp_backward(const MlpParams& params, const ForwardCache& cache,
                  std::span<const double> upstream, MlpParams& grads) {
  if (!grads.same_shape(params)) {
    throw PreconditionError("mlp_backward: gradient shape mismatch");
  }
  if (upstream.size() != params.out_dim()) {
    throw PreconditionError("mlp_backward: upstream size mismatch");
  }
  const auto& k = simd::active();
  std::vector<double> delta(upstream.begin(), upstream.end());
  std::vector<double> prev;
  for (std::size_t l = params.layer_count(); l-- > 0;) {
    const std::size_t rows = params.dims()[l + 1];
    const std::size_t cols = params.dims()[l];
    k.ger(grads.weights(l).data(), rows, cols, delta.data(),
          cache.acts[l].data());
    k.axpy(1.0, delta.data(), grads.bias(l).data(), rows);
    if (l == 0) break;
    prev.assign(cols, 0.0);
    k.gemv_t_acc(params.weights(l).data(), rows, cols, delta.data(),
                 prev.data());
    const auto& act = cache.acts[l];
    for (std::size_t j = 0; j < cols; ++j) prev[j] *= 1.0 - act[j] * act[j];
    delta.swap(prev);
  }
}

MlpParams backward(const MlpParams& params,
                   std::span<const BackwardSample> batch) {
  if (batch.empty()) throw PreconditionError("backward: empty batch");
  MlpParams grads(params.dims());
  ForwardCache cache;
  for (const BackwardSample& s : batch) {
    mlp_forward(params, s.input, cache);
    mlp_backward(params, cache, s.upstream, grads);
  }
  return grads;
}

PolicyOutput masked_softmax(std::span<const double> logits,
                            std::span<const std::uint8_t> mask) {
  if (logits.size() != mask.size()) {
    throw PreconditionError("policy: mask length " + std::to_string(mask.size()) +
                            " != action count " + std::to_string(logits.size()));
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double max_logit = kNegInf;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) max_logit = std::max(max_logit, logits[i]);
  }
  if (max_logit == kNegInf) throw PreconditionError("policy: all-false action mask");
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) sum += std::exp(logits[i] - max_logit);
  }
  const double log_sum = std::log(sum);
  PolicyOutput out;
  out.logits.assign(logits.begin(), logits.end());
  out.log_probs.assign(logits.size(), kNegInf);
  out.probs.assign(logits.size(), 0.0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    out.log_probs[i] = logits[i] - max_logit - log_sum;
    out.probs[i] = std::exp(out.log_probs[i]);
    out.entropy -= out.probs[i] * out.log_probs[i];
  }
  out.entropy = std::max(0.0, out.entropy);
  return out;
}

PolicyOutput policy_forward(const MlpParams& params, const Observation& obs,
                            ForwardCache& cache) {
  mlp_forward(params, obs.features, cache);
  return masked_softmax(cache.output(), obs.mask);
}

PolicyOutput policy_forward(const MlpParams& params, const Observation& obs) {
  ForwardCache cache;
  return policy_forward(params, obs, cache);
}

double value_forward(const MlpParams& params, const Observation& obs,
                     ForwardCache& cache) {
  if (params.out_dim() != 1) throw PreconditionError("value net must have one output");
  mlp_forward(params, obs.features, cache);
  return cache.output()[0];
}

double value_forward(const MlpParams& params, const Observation& obs) {
  ForwardCache cache;
  return value_forward(params, obs, cache);
}

std::vector<std::size_t> policy_dims(std::size_t obs_dim, std::size_t actions,
                                     std::size_t hidden) {
  return {obs_dim, hidden, hidden, actions};
}

std::vector<std::size_t> value_dims(std::size_t obs_dim, std::size_t hidden) {
  return {obs_dim, hidden, hidden, 1};
}

}  // namespace xmix
