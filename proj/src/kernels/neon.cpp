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

#include "chaosbench/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

#include <algorithm>
#include <cmath>

namespace chaosbench::kernels {

#if defined(__aarch64__)

namespace {

// vmulq/vaddq rather than vfmaq so results match the scalar reference.
inline void axpy_row(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + j));
        vst1q_f64(y + j, vaddq_f64(vld1q_f64(y + j), prod));
    }
    for (; j < n; ++j) {
        y[j] += alpha * x[j];
    }
}

void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        if (!accumulate) {
            std::fill(ci, ci + n, 0.0);
        }
        for (std::size_t p = 0; p < k; ++p) {
            axpy_row(a[i * k + p], b + p * n, ci, n);
        }
    }
}

void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
    if (!accumulate) {
        std::fill(c, c + m * n, 0.0);
    }
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t i = 0; i < m; ++i) {
            axpy_row(a[p * m + i], b + p * n, c + i * n, n);
        }
    }
}

void adam_update(double* theta, const double* grad, double* m, double* v, std::size_t n,
                 const AdamCoeffs& k) {
    const float64x2_t b1 = vdupq_n_f64(k.beta1);
    const float64x2_t b2 = vdupq_n_f64(k.beta2);
    const float64x2_t omb1 = vdupq_n_f64(k.one_minus_beta1);
    const float64x2_t omb2 = vdupq_n_f64(k.one_minus_beta2);
    const float64x2_t bias1 = vdupq_n_f64(k.bias1);
    const float64x2_t bias2 = vdupq_n_f64(k.bias2);
    const float64x2_t lr = vdupq_n_f64(k.lr);
    const float64x2_t eps = vdupq_n_f64(k.eps);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t g = vld1q_f64(grad + i);
        const float64x2_t vm = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(omb1, g));
        const float64x2_t vv =
            vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(omb2, vmulq_f64(g, g)));
        vst1q_f64(m + i, vm);
        vst1q_f64(v + i, vv);
        const float64x2_t m_hat = vdivq_f64(vm, bias1);
        const float64x2_t v_hat = vdivq_f64(vv, bias2);
        const float64x2_t upd =
            vdivq_f64(vmulq_f64(lr, m_hat), vaddq_f64(vsqrtq_f64(v_hat), eps));
        vst1q_f64(theta + i, vsubq_f64(vld1q_f64(theta + i), upd));
    }
    for (; i < n; ++i) {
        const double g = grad[i];
        m[i] = k.beta1 * m[i] + k.one_minus_beta1 * g;
        v[i] = k.beta2 * v[i] + k.one_minus_beta2 * (g * g);
        const double m_hat = m[i] / k.bias1;
        const double v_hat = v[i] / k.bias2;
        theta[i] -= k.lr * m_hat / (std::sqrt(v_hat) + k.eps);
    }
}

}  // namespace

const Backend* neon_backend() noexcept {
    static const Backend backend{"neon", &gemm_nn, &gemm_tn, &adam_update};
    return &backend;
}

#else

const Backend* neon_backend() noexcept { return nullptr; }

#endif

}  // namespace chaosbench::kernels
