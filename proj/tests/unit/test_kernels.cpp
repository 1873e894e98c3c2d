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

#include <doctest.h>

#include <cstring>
#include <vector>

#include "chaosbench/kernels.hpp"
#include "chaosbench/matrix.hpp"
#include "chaosbench/numerics.hpp"

using namespace chaosbench;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (double& v : m.values()) v = rng.uniform(-2.0, 2.0);
    return m;
}

Matrix naive_product(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            long double s = 0.0L;
            for (std::size_t p = 0; p < a.cols(); ++p) s += static_cast<long double>(a(i, p)) * b(p, j);
            c(i, j) = static_cast<double>(s);
        }
    return c;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<const kernels::Backend*> simd_backends() {
    std::vector<const kernels::Backend*> out;
    if (const auto* b = kernels::avx2_backend()) out.push_back(b);
    if (const auto* b = kernels::neon_backend()) out.push_back(b);
    return out;
}

}  // namespace

TEST_CASE("matmul examples") {
    const Matrix a{{1, 2}, {3, 4}};
    const Matrix b{{5}, {6}};
    CHECK(matmul(a, b) == Matrix{{17}, {39}});
    Rng rng(1);
    const Matrix m = random_matrix(rng, 2, 7);
    CHECK(matmul(Matrix::identity(2), m) == m);
}

TEST_CASE("matmul agrees with a naive triple loop") {
    Rng rng(7);
    const Matrix a = random_matrix(rng, 7, 5);
    const Matrix b = random_matrix(rng, 5, 3);
    CHECK(max_abs_diff(matmul(a, b), naive_product(a, b)) < 1e-15 * 8);
    CHECK(max_abs_diff(matmul_tn(a.transposed(), b), naive_product(a, b)) < 1e-14);
    CHECK(max_abs_diff(matmul_nt(a, b.transposed()), naive_product(a, b)) < 1e-14);
}

TEST_CASE("matmul is associative to rounding") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = random_matrix(rng, 4, 6);
        const Matrix b = random_matrix(rng, 6, 5);
        const Matrix c = random_matrix(rng, 5, 3);
        const Matrix l = matmul(matmul(a, b), c);
        const Matrix r = matmul(a, matmul(b, c));
        double scale = 0.0;
        for (double v : l.values()) scale = std::max(scale, std::abs(v));
        CHECK(max_abs_diff(l, r) <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("shape errors") {
    CHECK_THROWS(matmul(Matrix(2, 3), Matrix(2, 3)));
    CHECK_THROWS(Matrix(2, 2) + Matrix(2, 3));
}

TEST_CASE("SIMD GEMM kernels are bit-identical to the scalar reference") {
    const auto& ref = kernels::scalar_backend();
    Rng rng(99);
    for (const kernels::Backend* simd : simd_backends()) {
        CAPTURE(simd->name);
        for (std::size_t m : {1u, 3u, 32u}) {
            for (std::size_t k : {1u, 2u, 10u, 40u}) {
                for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 40u, 64u}) {
                    std::vector<double> a(m * k), b(k * n), c0(m * n), c1, c2;
                    for (double& v : a) v = rng.uniform(-1, 1);
                    for (double& v : b) v = rng.uniform(-1, 1);
                    for (double& v : c0) v = rng.uniform(-1, 1);
                    for (bool acc : {false, true}) {
                        c1 = c0;
                        c2 = c0;
                        ref.gemm_nn(a.data(), b.data(), c1.data(), m, k, n, acc);
                        simd->gemm_nn(a.data(), b.data(), c2.data(), m, k, n, acc);
                        REQUIRE(bitwise_equal(c1, c2));
                        // a reinterpreted as [k x m] for the transposed product.
                        c1 = c0;
                        c2 = c0;
                        ref.gemm_tn(a.data(), b.data(), c1.data(), m, k, n, acc);
                        simd->gemm_tn(a.data(), b.data(), c2.data(), m, k, n, acc);
                        REQUIRE(bitwise_equal(c1, c2));
                    }
                }
            }
        }
    }
}

TEST_CASE("SIMD Adam kernel is bit-identical to the scalar reference") {
    const auto& ref = kernels::scalar_backend();
    Rng rng(5);
    for (const kernels::Backend* simd : simd_backends()) {
        for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 13u, 64u, 257u}) {
            std::vector<double> th(n), g(n), m(n), v(n);
            for (std::size_t i = 0; i < n; ++i) {
                th[i] = rng.uniform(-1, 1);
                m[i] = rng.uniform(-0.1, 0.1);
                v[i] = rng.uniform(0.0, 0.01);
            }
            auto th2 = th, m2 = m, v2 = v;
            for (int t = 1; t <= 5; ++t) {
                for (double& x : g) x = rng.uniform(-3, 3);
                const kernels::AdamCoeffs k{0.9, 0.999, 0.1, 0.001, 1 - std::pow(0.9, t), 1 - std::pow(0.999, t),
                                            1e-3, 1e-8};
                ref.adam_update(th.data(), g.data(), m.data(), v.data(), n, k);
                simd->adam_update(th2.data(), g.data(), m2.data(), v2.data(), n, k);
            }
            CHECK(bitwise_equal(th, th2));
            CHECK(bitwise_equal(m, m2));
            CHECK(bitwise_equal(v, v2));
        }
    }
}

TEST_CASE("backend selection") {
    CHECK(kernels::select("scalar"));
    CHECK(kernels::active().name == "scalar");
    Rng rng(4);
    const Matrix a = random_matrix(rng, 9, 11);
    const Matrix b = random_matrix(rng, 11, 13);
    const Matrix ref = matmul(a, b);
    CHECK_FALSE(kernels::select("bogus"));
    CHECK(kernels::select("auto"));
    CHECK(matmul(a, b) == ref);
    if (kernels::avx2_backend()) {
        CHECK(kernels::select("avx2"));
        CHECK(kernels::active().name == "avx2");
        CHECK(matmul(a, b) == ref);
    }
    kernels::select("auto");
}
