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

#include "chaosbench/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaosbench/errors.hpp"
#include "chaosbench/kernels.hpp"

namespace chaosbench {

namespace {

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " +
                         shape_str(b));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw ShapeError("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::from_rows(std::size_t rows, std::size_t cols, std::vector<double> data) {
    if (data.size() != rows * cols) {
        throw ShapeError("matrix data length " + std::to_string(data.size()) + " != " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    }
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(data);
    return m;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: " + shape_str(a) + " * " + shape_str(b));
    }
    Matrix c(a.rows(), b.cols());
    kernels::active().gemm_nn(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols(), false);
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: " + shape_str(a) + "^T * " + shape_str(b));
    }
    Matrix c(a.cols(), b.cols());
    kernels::active().gemm_tn(a.data(), b.data(), c.data(), a.cols(), a.rows(), b.cols(), false);
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: " + shape_str(a) + " * " + shape_str(b) + "^T");
    }
    return matmul(a, b.transposed());
}

void matmul_acc(const Matrix& a, const Matrix& b, Matrix& c) {
    if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols()) {
        throw ShapeError("matmul_acc: " + shape_str(a) + " * " + shape_str(b) + " into " +
                         shape_str(c));
    }
    kernels::active().gemm_nn(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols(), true);
}

void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& c) {
    if (a.rows() != b.rows() || c.rows() != a.cols() || c.cols() != b.cols()) {
        throw ShapeError("matmul_tn_acc: " + shape_str(a) + "^T * " + shape_str(b) + " into " +
                         shape_str(c));
    }
    kernels::active().gemm_tn(a.data(), b.data(), c.data(), a.cols(), a.rows(), b.cols(), true);
}

void add_row_broadcast(Matrix& m, const Matrix& bias) {
    if (bias.rows() != 1 || bias.cols() != m.cols()) {
        throw ShapeError("bias " + shape_str(bias) + " does not broadcast over " + shape_str(m));
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            row[c] += bias(0, c);
        }
    }
}

Matrix column_sums(const Matrix& m) {
    Matrix out(1, m.cols());
    column_sums_acc(m, out);
    return out;
}

void column_sums_acc(const Matrix& m, Matrix& out) {
    if (out.rows() != 1 || out.cols() != m.cols()) {
        throw ShapeError("column_sums: output " + shape_str(out) + " for " + shape_str(m));
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            out(0, c) += row[c];
        }
    }
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix c = a;
    auto cv = c.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < cv.size(); ++i) {
        cv[i] += bv[i];
    }
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    Matrix c = a;
    auto cv = c.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < cv.size(); ++i) {
        cv[i] -= bv[i];
    }
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c = a;
    for (double& v : c.values()) {
        v *= s;
    }
    return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix c = a;
    auto cv = c.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < cv.size(); ++i) {
        cv[i] *= bv[i];
    }
    return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) {
        worst = std::max(worst, std::abs(av[i] - bv[i]));
    }
    return worst;
}

}  // namespace chaosbench
