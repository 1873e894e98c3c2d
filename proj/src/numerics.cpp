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

#include "chaosbench/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaosbench/errors.hpp"

namespace chaosbench {

std::string_view to_string(Activation a) noexcept {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::linear: return "linear";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::softmax: return "softmax";
    }
    return "unknown";
}

Activation activation_from_string(std::string_view name) {
    for (Activation a : {Activation::tanh, Activation::linear, Activation::relu,
                         Activation::sigmoid, Activation::softmax}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void apply_activation_inplace(Matrix& m, Activation act) {
    switch (act) {
        case Activation::linear:
            return;
        case Activation::tanh:
            for (double& v : m.values()) v = std::tanh(v);
            return;
        case Activation::relu:
            for (double& v : m.values()) v = v > 0.0 ? v : 0.0;
            return;
        case Activation::sigmoid:
            for (double& v : m.values()) v = sigmoid(v);
            return;
        case Activation::softmax:
            for (std::size_t r = 0; r < m.rows(); ++r) {
                auto row = m.row(r);
                const double mx = *std::max_element(row.begin(), row.end());
                double sum = 0.0;
                for (double& v : row) {
                    v = std::exp(v - mx);
                    sum += v;
                }
                for (double& v : row) v /= sum;
            }
            return;
    }
}

Matrix apply_activation(const Matrix& m, Activation act) {
    Matrix out = m;
    apply_activation_inplace(out, act);
    return out;
}

Matrix activation_backward(Activation act, const Matrix& pre, const Matrix& out,
                           const Matrix& upstream) {
    Matrix g = upstream;
    auto gv = g.values();
    auto ov = out.values();
    switch (act) {
        case Activation::linear:
            break;
        case Activation::tanh:
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= 1.0 - ov[i] * ov[i];
            break;
        case Activation::relu: {
            auto pv = pre.values();
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = pv[i] > 0.0 ? gv[i] : 0.0;
            break;
        }
        case Activation::sigmoid:
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= ov[i] * (1.0 - ov[i]);
            break;
        case Activation::softmax:
            for (std::size_t r = 0; r < g.rows(); ++r) {
                auto gr = g.row(r);
                auto sr = out.row(r);
                double dot = 0.0;
                for (std::size_t c = 0; c < gr.size(); ++c) dot += gr[c] * sr[c];
                for (std::size_t c = 0; c < gr.size(); ++c) gr[c] = sr[c] * (gr[c] - dot);
            }
            break;
    }
    return g;
}

// --- Rng -------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
        sm += kGolden;
        word = mix64(sm);
    }
}

std::uint64_t Rng::next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) {
            return r % n;
        }
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix64(master + kGolden);
    for (std::uint64_t idx : path) {
        h = mix64(h ^ mix64(idx + kGolden));
    }
    return h;
}

Matrix glorot_uniform(Rng& rng, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw ConfigError("glorot_uniform: rows and cols must be >= 1");
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (double& v : m.values()) {
        v = rng.uniform(-bound, bound);
    }
    return m;
}

// --- gradient check --------------------------------------------------------

double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> analytic, std::span<const double> point) {
    if (analytic.size() != point.size()) {
        throw ShapeError("grad_check: gradient length " + std::to_string(analytic.size()) +
                         " != point length " + std::to_string(point.size()));
    }
    std::vector<double> probe(point.begin(), point.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + kGradCheckStep;
        const double up = f(probe);
        probe[i] = orig - kGradCheckStep;
        const double down = f(probe);
        probe[i] = orig;
        const double num = (up - down) / (2.0 * kGradCheckStep);
        const double ana = analytic[i];
        const double denom = std::max(kGradCheckFloor, std::abs(num) + std::abs(ana));
        worst = std::max(worst, std::abs(num - ana) / denom);
    }
    return worst;
}

}  // namespace chaosbench
