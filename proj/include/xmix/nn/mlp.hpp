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

#ifndef XMIX_NN_MLP_HPP_
#define XMIX_NN_MLP_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xmix/env/road_env.hpp"
#include "xmix/rng.hpp"

namespace xmix {

inline constexpr std::size_t kHiddenUnits = 128;

// Fully connected network in_dim -> hidden... -> out_dim with tanh hidden
// activations and a linear output. Parameters live in one contiguous buffer:
// for each layer the row-major weight matrix (out x in) followed by the bias.
class MlpParams {
 public:
  MlpParams() = default;
  explicit MlpParams(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t layer_count() const { return dims_.empty() ? 0 : dims_.size() - 1; }
  std::size_t in_dim() const { return dims_.front(); }
  std::size_t out_dim() const { return dims_.back(); }
  std::size_t size() const { return data_.size(); }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool same_shape(const MlpParams& other) const { return dims_ == other.dims_; }
  bool all_finite() const;
  void set_zero();

  friend bool operator==(const MlpParams&, const MlpParams&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights
  std::vector<double> data_;
};

// Hidden layers: uniform in +-sqrt(6 / fan_in). Output layer: zero when
// `zero_output` is set, otherwise uniform in +-sqrt(1 / fan_in). Biases zero.
MlpParams init_mlp(std::vector<std::size_t> dims, Rng& rng, bool zero_output);

// Activations of every layer for one input; acts[0] is the input itself.
struct ForwardCache {
  std::vector<std::vector<double>> acts;
  std::span<const double> output() const { return acts.back(); }
};

void mlp_forward(const MlpParams& params, std::span<const double> input,
                 ForwardCache& cache);
std::vector<double> mlp_forward(const MlpParams& params,
                                std::span<const double> input);

// Adds d(upstream . output)/d(params) for the cached sample into `grads`.
void mlp_backward(const MlpParams& params, const ForwardCache& cache,
                  std::span<const double> upstream, MlpParams& grads);

struct BackwardSample {
  std::vector<double> input;
  std::vector<double> upstream;  // d loss / d output
};

// Gradient of sum_b upstream_b . f(input_b) with respect to every parameter.
MlpParams backward(const MlpParams& params,
                   std::span<const BackwardSample> batch);

struct PolicyOutput {
  std::vector<double> logits;
  std::vector<double> log_probs;  // -inf on masked slots
  std::vector<double> probs;      // exactly 0 on masked slots
  double entropy = 0.0;
};

// Masked softmax over the network logits. Throws PreconditionError on a
// dimension mismatch or an all-false mask.
PolicyOutput masked_softmax(std::span<const double> logits,
                            std::span<const std::uint8_t> mask);
PolicyOutput policy_forward(const MlpParams& params, const Observation& obs);
PolicyOutput policy_forward(const MlpParams& params, const Observation& obs,
                            ForwardCache& cache);

double value_forward(const MlpParams& params, const Observation& obs);
double value_forward(const MlpParams& params, const Observation& obs,
                     ForwardCache& cache);

std::vector<std::size_t> policy_dims(std::size_t obs_dim, std::size_t actions,
                                     std::size_t hidden = kHiddenUnits);
std::vector<std::size_t> value_dims(std::size_t obs_dim,
                                    std::size_t hidden = kHiddenUnits);

}  // namespace xmix

#endif  // XMIX_NN_MLP_HPP_
