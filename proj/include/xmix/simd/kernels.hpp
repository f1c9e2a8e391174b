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

#ifndef XMIX_SIMD_KERNELS_HPP_
#define XMIX_SIMD_KERNELS_HPP_

// Dense double-precision kernels used by the network layers and the
// optimizer. Each kernel has a portable scalar reference implementation and,
// on x86-64, an AVX2+FMA variant. The variant is picked once per process at
// first use (CPUID), and can be pinned with XMIX_SIMD=scalar|avx2.
//
// All matrices are row-major and densely packed.

#include <cstddef>
#include <span>
#include <string_view>

namespace xmix::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = W x + b, W is rows x cols. b may be null.
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols,
               const double* x, const double* b, double* y);
  // y += W^T g, W is rows x cols, g has rows entries, y has cols entries.
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols,
                     const double* g, double* y);
  // W += g x^T (rank-1 accumulate).
  void (*ger)(double* w, std::size_t rows, std::size_t cols, const double* g,
              const double* x);
  // Adam moment update and parameter step over n entries.
  void (*adam)(double* param, const double* grad, double* m, double* v,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double bias1, double bias2);
};

const KernelTable& scalar_kernels();
// Returns nullptr when the binary or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// The table selected for this process.
const KernelTable& active();
std::string_view isa_name(Isa isa);

// Thin span-based wrappers over active().
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace xmix::simd

#endif  // XMIX_SIMD_KERNELS_HPP_
