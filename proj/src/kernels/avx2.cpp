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

#if defined(__x86_64__) || defined(_M_X64)
#define CHAOSBENCH_HAVE_AVX2 1
#include <immintrin.h>
#else
#define CHAOSBENCH_HAVE_AVX2 0
#endif

#include <algorithm>
#include <cmath>

namespace chaosbench::kernels {

#if CHAOSBENCH_HAVE_AVX2

namespace {

// FMA is deliberately not enabled: mul then add keeps results identical to the
// scalar reference.
#define CB_AVX2 __attribute__((target("avx2")))

CB_AVX2 inline void axpy_row(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        __m256d y0 = _mm256_loadu_pd(y + j);
        __m256d y1 = _mm256_loadu_pd(y + j + 4);
        y0 = _mm256_add_pd(y0, _mm256_mul_pd(va, _mm256_loadu_pd(x + j)));
        y1 = _mm256_add_pd(y1, _mm256_mul_pd(va, _mm256_loadu_pd(x + j + 4)));
        _mm256_storeu_pd(y + j, y0);
        _mm256_storeu_pd(y + j + 4, y1);
    }
    for (; j + 4 <= n; j += 4) {
        __m256d y0 = _mm256_loadu_pd(y + j);
        y0 = _mm256_add_pd(y0, _mm256_mul_pd(va, _mm256_loadu_pd(x + j)));
        _mm256_storeu_pd(y + j, y0);
    }
    for (; j < n; ++j) {
        y[j] += alpha * x[j];
    }
}

CB_AVX2 void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
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

CB_AVX2 void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                     std::size_t n, bool accumulate) {
    if (!accumulate) {
        std::fill(c, c + m * n, 0.0);
    }
    for (std::size_t p = 0; p < k; ++p) {
        const double* ap = a + p * m;
        const double* bp = b + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            axpy_row(ap[i], bp, c + i * n, n);
        }
    }
}

CB_AVX2 void adam_update(double* theta, const double* grad, double* m, double* v, std::size_t n,
                         const AdamCoeffs& k) {
    const __m256d b1 = _mm256_set1_pd(k.beta1);
    const __m256d b2 = _mm256_set1_pd(k.beta2);
    const __m256d omb1 = _mm256_set1_pd(k.one_minus_beta1);
    const __m256d omb2 = _mm256_set1_pd(k.one_minus_beta2);
    const __m256d bias1 = _mm256_set1_pd(k.bias1);
    const __m256d bias2 = _mm256_set1_pd(k.bias2);
    const __m256d lr = _mm256_set1_pd(k.lr);
    const __m256d eps = _mm256_set1_pd(k.eps);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_loadu_pd(grad + i);
        __m256d vm = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(omb1, g));
        __m256d vv = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                   _mm256_mul_pd(omb2, _mm256_mul_pd(g, g)));
        _mm256_storeu_pd(m + i, vm);
        _mm256_storeu_pd(v + i, vv);
        const __m256d m_hat = _mm256_div_pd(vm, bias1);
        const __m256d v_hat = _mm256_div_pd(vv, bias2);
        const __m256d upd =
            _mm256_div_pd(_mm256_mul_pd(lr, m_hat), _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
        _mm256_storeu_pd(theta + i, _mm256_sub_pd(_mm256_loadu_pd(theta + i), upd));
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

#undef CB_AVX2

}  // namespace

const Backend* avx2_backend() noexcept {
    static const Backend backend{"avx2", &gemm_nn, &gemm_tn, &adam_update};
    return __builtin_cpu_supports("avx2") ? &backend : nullptr;
}

#else

const Backend* avx2_backend() noexcept { return nullptr; }

#endif

}  // namespace chaosbench::kernels
