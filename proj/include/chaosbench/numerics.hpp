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

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "chaosbench/matrix.hpp"

namespace chaosbench {

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

enum class Activation { tanh, linear, relu, sigmoid, softmax };

std::string_view to_string(Activation a) noexcept;
Activation activation_from_string(std::string_view name);

/// Elementwise map, or row-wise softmax with max subtraction.
Matrix apply_activation(const Matrix& m, Activation act);
void apply_activation_inplace(Matrix& m, Activation act);

/// Given the forward output `out` (and pre-activation `pre` for relu) and the
/// upstream gradient, returns the gradient w.r.t. the pre-activation. For
/// softmax this is the full Jacobian-vector product s * (g - <g, s>) per row.
Matrix activation_backward(Activation act, const Matrix& pre, const Matrix& out,
                           const Matrix& upstream);

inline double sigmoid(double z) noexcept {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// xoshiro256** seeded through splitmix64. The stream is fully specified, so a
/// seed reproduces the same numbers on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64() noexcept;
    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n) by rejection of the biased low range. n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    /// Fisher-Yates from the back, one `below` draw per position.
    template <typename T>
    void shuffle(std::vector<T>& v) noexcept {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t s_[4];
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Child seed for independent work items: folds each index into the master seed
/// with mix64, so derive_seed(m, {i, j}) is stable and order-sensitive.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

/// rows x cols entries uniform on +-sqrt(6 / (rows + cols)); consumes rows*cols draws
/// in row-major order.
Matrix glorot_uniform(Rng& rng, std::size_t rows, std::size_t cols);

// ---------------------------------------------------------------------------
// Gradient checking
// ---------------------------------------------------------------------------

inline constexpr double kGradCheckStep = 1e-6;
/// Denominator floor. Central differences at step 1e-6 on an O(1) loss resolve
/// a derivative only to about 1e-10, so entries far below 1e-4 are judged on
/// absolute error (tol * 1e-4) instead of a relative error that is mostly noise.
inline constexpr double kGradCheckFloor = 1e-4;

/// Central-difference check of `analytic` against f at `point` with step 1e-6.
/// Returns max_i |num_i - ana_i| / max(kGradCheckFloor, |num_i| + |ana_i|).
double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> analytic, std::span<const double> point);

}  // namespace chaosbench
