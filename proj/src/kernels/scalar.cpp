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

#include <algorithm>
#include <cmath>

#include "chaosbench/kernels.hpp"

namespace chaosbench::kernels {

namespace {

void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        if (!accumulate) {
            std::fill(ci, ci + n, 0.0);
        }
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a[i * k + p];
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += aip * bp[j];
            }
        }
    }
}

void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
    if (!accumulate) {
        std::fill(c, c + m * n, 0.0);
    }
    for (std::size_t p = 0; p < k; ++p) {
        const double* ap = a + p * m;
        const double* bp = b + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double api = ap[i];
            double* ci = c + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += api * bp[j];
            }
        }
    }
}

void adam_update(double* theta, const double* grad, double* m, double* v, std::size_t n,
                 const AdamCoeffs& k) {
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        m[i] = k.beta1 * m[i] + k.one_minus_beta1 * g;
        v[i] = k.beta2 * v[i] + k.one_minus_beta2 * (g * g);
        const double m_hat = m[i] / k.bias1;
        const double v_hat = v[i] / k.bias2;
        theta[i] -= k.lr * m_hat / (std::sqrt(v_hat) + k.eps);
    }
}

}  // namespace

const Backend& scalar_backend() noexcept {
    static const Backend backend{"scalar", &gemm_nn, &gemm_tn, &adam_update};
    return backend;
}

}  // namespace chaosbench::kernels
