// Copyright 2026 the chaosbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string_view>

// Inner-loop kernels with a scalar reference and SIMD variants.
//
// Every variant preserves the per-element operation order of the scalar
// reference (vectorization runs across independent output columns, never
// across a reduction, and no fused multiply-add is used), so all backends
// produce bit-identical results. The equivalence tests rely on this.

namespace chaosbench::kernels {

/// c[m x n] (+)= a[m x k] * b[k x n], all row-major. When `accumulate` is false
/// c is overwritten.
using GemmNN = void (*)(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n, bool accumulate);

/// c[m x n] (+)= a^T * b where a is [k x m] and b is [k x n].
using GemmTN = void (*)(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n, bool accumulate);

struct AdamCoeffs {
    double beta1;
    double beta2;
    double one_minus_beta1;
    double one_minus_beta2;
    double bias1;  // 1 - beta1^t
    double bias2;  // 1 - beta2^t
    double lr;
    double eps;
};

/// In-place Adam update over n parameters:
///   m = b1 m + (1-b1) g;  v = b2 v + (1-b2) g^2;
///   theta -= lr * (m / bias1) / (sqrt(v / bias2) + eps)
using AdamUpdate = void (*)(double* theta, const double* grad, double* m, double* v,
                            std::size_t n, const AdamCoeffs& k);

struct Backend {
    std::string_view name;
    GemmNN gemm_nn;
    GemmTN gemm_tn;
    AdamUpdate adam_update;
};

const Backend& scalar_backend() noexcept;
/// nullptr when the variant was not compiled for this target.
const Backend* avx2_backend() noexcept;
const Backend* neon_backend() noexcept;

/// Best backend supported by the running CPU. `CHAOSBENCH_SIMD=scalar` forces
/// the reference kernels.
const Backend& active() noexcept;

/// Overrides the dispatch choice; returns false if `name` is unknown or unsupported.
bool select(std::string_view name) noexcept;

}  // namespace chaosbench::kernels
