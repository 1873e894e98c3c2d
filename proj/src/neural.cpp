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

#include "chaosbench/neural.hpp"

#include <string>

#include "chaosbench/errors.hpp"

namespace chaosbench {

namespace {

void require_targets(const Matrix& pred, const Matrix& targets) {
    if (pred.rows() != targets.rows() || pred.cols() != targets.cols()) {
        throw ShapeError("targets " + std::to_string(targets.rows()) + "x" +
                         std::to_string(targets.cols()) + " do not match predictions " +
                         std::to_string(pred.rows()) + "x" + std::to_string(pred.cols()));
    }
}

/// d(mean squared error)/d(pred).
Matrix mse_grad(const Matrix& pred, const Matrix& targets) {
    Matrix g = pred - targets;
    const double scale = 2.0 / static_cast<double>(pred.size());
    for (double& v : g.values()) v *= scale;
    return g;
}

ParamList zeros_like(const ParamList& tensors) {
    ParamList out;
    out.reserve(tensors.size());
    for (const Matrix& t : tensors) out.emplace_back(t.rows(), t.cols());
    return out;
}

/// Timestep t of a flattened sequence batch as a [B x input_dim] matrix.
Matrix timestep(const Matrix& batch, std::size_t t, std::size_t input_dim) {
    Matrix x(batch.rows(), input_dim);
    for (std::size_t r = 0; r < batch.rows(); ++r) {
        const auto row = batch.row(r);
        for (std::size_t f = 0; f < input_dim; ++f) x(r, f) = row[t * input_dim + f];
    }
    return x;
}

std::size_t sequence_length(const RecurrentConfig& cfg, const Matrix& batch) {
    if (cfg.input_dim == 0 || batch.cols() == 0 || batch.cols() % cfg.input_dim != 0) {
        throw ShapeError("batch width " + std::to_string(batch.cols()) +
                         " is not a positive multiple of input width " +
                         std::to_string(cfg.input_dim));
    }
    return batch.cols() / cfg.input_dim;
}

void validate(const RecurrentConfig& cfg) {
    if (cfg.input_dim == 0 || cfg.output_dim == 0 || cfg.layers.empty()) {
        throw ConfigError("recurrent config needs input/output widths and at least one layer");
    }
    for (std::size_t h : cfg.layers) {
        if (h == 0) throw ConfigError("recurrent layer width must be >= 1");
    }
}

}  // namespace

std::string_view to_string(Profile p) noexcept { return p == Profile::A ? "A" : "B"; }

Profile profile_from_string(std::string_view name) {
    if (name == "A" || name == "a") return Profile::A;
    if (name == "B" || name == "b") return Profile::B;
    throw ConfigError("unknown profile '" + std::string(name) + "' (expected A or B)");
}

double mse_loss(const Matrix& pred, const Matrix& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw ShapeError("mse_loss: shape mismatch");
    }
    if (pred.empty()) {
        throw ShapeError("mse_loss: empty input");
    }
    double sum = 0.0;
    const auto pv = pred.values();
    const auto tv = target.values();
    for (std::size_t i = 0; i < pv.size(); ++i) {
        const double d = pv[i] - tv[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pv.size());
}

// ===========================================================================
// FNN
// ===========================================================================

FnnParams FnnParams::zeros(const FnnConfig& cfg) {
    if (cfg.input_dim == 0 || cfg.hidden1 == 0 || cfg.hidden2 == 0 || cfg.output_dim == 0) {
        throw ConfigError("FNN layer widths must be >= 1");
    }
    FnnParams p;
    p.config = cfg;
    p.tensors = {Matrix(cfg.input_dim, cfg.hidden1), Matrix(1, cfg.hidden1),
                 Matrix(cfg.hidden1, cfg.hidden2), Matrix(1, cfg.hidden2),
                 Matrix(cfg.hidden2, cfg.output_dim), Matrix(1, cfg.output_dim)};
    return p;
}

FnnParams FnnParams::init(const FnnConfig& cfg, Rng& rng) {
    FnnParams p = zeros(cfg);
    p.tensors[0] = glorot_uniform(rng, cfg.input_dim, cfg.hidden1);
    p.tensors[2] = glorot_uniform(rng, cfg.hidden1, cfg.hidden2);
    p.tensors[4] = glorot_uniform(rng, cfg.hidden2, cfg.output_dim);
    return p;
}

namespace {

struct FnnTrace {
    Matrix z1, a1, z2, a2, z3, out;
};

FnnTrace fnn_trace(const FnnParams& p, const Matrix& batch) {
    if (batch.cols() != p.config.input_dim) {
        throw ShapeError("FNN expects input width " + std::to_string(p.config.input_dim) +
                         ", got " + std::to_string(batch.cols()));
    }
    const ParamList& w = p.tensors;
    FnnTrace tr;
    tr.z1 = matmul(batch, w[0]);
    add_row_broadcast(tr.z1, w[1]);
    tr.a1 = apply_activation(tr.z1, Activation::relu);
    tr.z2 = matmul(tr.a1, w[2]);
    add_row_broadcast(tr.z2, w[3]);
    tr.a2 = apply_activation(tr.z2, Activation::relu);
    tr.z3 = matmul(tr.a2, w[4]);
    add_row_broadcast(tr.z3, w[5]);
    tr.out = apply_activation(tr.z3, p.config.output);
    return tr;
}

}  // namespace

Matrix fnn_forward(const FnnParams& p, const Matrix& batch) { return fnn_trace(p, batch).out; }

Gradients fnn_backward(const FnnParams& p, const Matrix& batch, const Matrix& targets) {
    FnnTrace tr = fnn_trace(p, batch);
    require_targets(tr.out, targets);
    const ParamList& w = p.tensors;

    Gradients g;
    g.loss = mse_loss(tr.out, targets);
    g.grads = zeros_like(w);

    Matrix dz3 = activation_backward(p.config.output, tr.z3, tr.out, mse_grad(tr.out, targets));
    g.grads[4] = matmul_tn(tr.a2, dz3);
    g.grads[5] = column_sums(dz3);

    Matrix dz2 = activation_backward(Activation::relu, tr.z2, tr.a2, matmul_nt(dz3, w[4]));
    g.grads[2] = matmul_tn(tr.a1, dz2);
    g.grads[3] = column_sums(dz2);

    Matrix dz1 = activation_backward(Activation::relu, tr.z1, tr.a1, matmul_nt(dz2, w[2]));
    g.grads[0] = matmul_tn(batch, dz1);
    g.grads[1] = column_sums(dz1);
    return g;
}

// ===========================================================================
// Recurrent configs
// ===========================================================================

RecurrentConfig rnn_profile(Profile p) {
    RecurrentConfig cfg;
    cfg.layers = p == Profile::A ? std::vector<std::size_t>{10} : std::vector<std::size_t>{32, 24};
    return cfg;
}

RecurrentConfig lstm_profile(Profile p) {
    RecurrentConfig cfg;
    cfg.layers = p == Profile::A ? std::vector<std::size_t>{10} : std::vector<std::size_t>{50, 50};
    return cfg;
}

// ===========================================================================
// Simple RNN
// ===========================================================================

RnnParams RnnParams::zeros(const RecurrentConfig& cfg) {
    validate(cfg);
    RnnParams p;
    p.config = cfg;
    std::size_t fan_in = cfg.input_dim;
    for (std::size_t h : cfg.layers) {
        p.tensors.emplace_back(fan_in, h);
        p.tensors.emplace_back(h, h);
        p.tensors.emplace_back(1, h);
        fan_in = h;
    }
    p.tensors.emplace_back(fan_in, cfg.output_dim);
    p.tensors.emplace_back(1, cfg.output_dim);
    return p;
}

RnnParams RnnParams::init(const RecurrentConfig& cfg, Rng& rng) {
    RnnParams p = zeros(cfg);
    std::size_t fan_in = cfg.input_dim;
    for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
        const std::size_t h = cfg.layers[l];
        p.tensors[3 * l] = glorot_uniform(rng, fan_in, h);
        p.tensors[3 * l + 1] = glorot_uniform(rng, h, h);
        fan_in = h;
    }
    p.tensors[3 * cfg.layers.size()] = glorot_uniform(rng, fan_in, cfg.output_dim);
    return p;
}

namespace {

struct RnnTrace {
    std::size_t steps = 0;
    std::vector<Matrix> inputs;             // per timestep, layer-0 input
    std::vector<std::vector<Matrix>> h;     // [layer][t]
    Matrix out;
};

RnnTrace rnn_trace(const RnnParams& p, const Matrix& batch) {
    const RecurrentConfig& cfg = p.config;
    RnnTrace tr;
    tr.steps = sequence_length(cfg, batch);
    const std::size_t n_layers = cfg.layers.size();
    tr.h.assign(n_layers, {});
    for (std::size_t t = 0; t < tr.steps; ++t) {
        tr.inputs.push_back(timestep(batch, t, cfg.input_dim));
        const Matrix* x = &tr.inputs.back();
        for (std::size_t l = 0; l < n_layers; ++l) {
            const Matrix& W = p.tensors[3 * l];
            const Matrix& U = p.tensors[3 * l + 1];
            const Matrix& b = p.tensors[3 * l + 2];
            Matrix z = matmul(*x, W);
            if (t > 0) {
                matmul_acc(tr.h[l][t - 1], U, z);
            }
            add_row_broadcast(z, b);
            apply_activation_inplace(z, Activation::tanh);
            tr.h[l].push_back(std::move(z));
            x = &tr.h[l].back();
        }
    }
    tr.out = matmul(tr.h[n_layers - 1].back(), p.tensors[3 * n_layers]);
    add_row_broadcast(tr.out, p.tensors[3 * n_layers + 1]);
    return tr;
}

}  // namespace

Matrix rnn_forward(const RnnParams& p, const Matrix& batch) { return rnn_trace(p, batch).out; }

Gradients rnn_backward(const RnnParams& p, const Matrix& batch, const Matrix& targets) {
    const RnnTrace tr = rnn_trace(p, batch);
    require_targets(tr.out, targets);
    const std::size_t n_layers = p.config.layers.size();
    const std::size_t head = 3 * n_layers;

    Gradients g;
    g.loss = mse_loss(tr.out, targets);
    g.grads = zeros_like(p.tensors);

    const Matrix d_out = mse_grad(tr.out, targets);
    g.grads[head] = matmul_tn(tr.h[n_layers - 1].back(), d_out);
    g.grads[head + 1] = column_sums(d_out);

    // dh_next[l]: gradient reaching h[l][t] from timestep t+1.
    std::vector<Matrix> dh_next(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        dh_next[l] = Matrix(batch.rows(), p.config.layers[l]);
    }
    for (std::size_t t = tr.steps; t-- > 0;) {
        // Gradient arriving from the layer above (or the head at the last step).
        Matrix from_above = t + 1 == tr.steps ? matmul_nt(d_out, p.tensors[head])
                                              : Matrix(batch.rows(), p.config.layers.back());
        for (std::size_t l = n_layers; l-- > 0;) {
            const Matrix& W = p.tensors[3 * l];
            const Matrix& U = p.tensors[3 * l + 1];
            const Matrix& h = tr.h[l][t];
            Matrix dz = from_above + dh_next[l];
            auto dzv = dz.values();
            const auto hv = h.values();
            for (std::size_t i = 0; i < dzv.size(); ++i) dzv[i] *= 1.0 - hv[i] * hv[i];

            const Matrix& x = l == 0 ? tr.inputs[t] : tr.h[l - 1][t];
            matmul_tn_acc(x, dz, g.grads[3 * l]);
            if (t > 0) {
                matmul_tn_acc(tr.h[l][t - 1], dz, g.grads[3 * l + 1]);
                dh_next[l] = matmul_nt(dz, U);
            }
            column_sums_acc(dz, g.grads[3 * l + 2]);
            if (l > 0) {
                from_above = matmul_nt(dz, W);
            }
        }
    }
    return g;
}

// ===========================================================================
// LSTM
// ===========================================================================

LstmParams LstmParams::zeros(const RecurrentConfig& cfg) {
    validate(cfg);
    LstmParams p;
    p.config = cfg;
    std::size_t fan_in = cfg.input_dim;
    for (std::size_t h : cfg.layers) {
        p.tensors.emplace_back(fan_in, 4 * h);
        p.tensors.emplace_back(h, 4 * h);
        p.tensors.emplace_back(1, 4 * h);
        fan_in = h;
    }
    p.tensors.emplace_back(fan_in, cfg.output_dim);
    p.tensors.emplace_back(1, cfg.output_dim);
    return p;
}

LstmParams LstmParams::init(const RecurrentConfig& cfg, Rng& rng) {
    LstmParams p = zeros(cfg);
    std::size_t fan_in = cfg.input_dim;
    for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
        const std::size_t h = cfg.layers[l];
        p.tensors[3 * l] = glorot_uniform(rng, fan_in, 4 * h);
        p.tensors[3 * l + 1] = glorot_uniform(rng, h, 4 * h);
        Matrix& b = p.tensors[3 * l + 2];
        for (std::size_t j = h; j < 2 * h; ++j) b(0, j) = 1.0;
        fan_in = h;
    }
    p.tensors[3 * cfg.layers.size()] = glorot_uniform(rng, fan_in, cfg.output_dim);
    return p;
}

namespace {

struct LstmStep {
    Matrix gates;  // post-activation [i | f | g | o], B x 4H
    Matrix c;      // cell state
    Matrix tanh_c;
    Matrix h;
};

struct LstmTrace {
    std::size_t steps = 0;
    std::vector<Matrix> inputs;
    std::vector<std::vector<LstmStep>> cells;  // [layer][t]
    Matrix out;
};

LstmTrace lstm_trace(const LstmParams& p, const Matrix& batch) {
    const RecurrentConfig& cfg = p.config;
    LstmTrace tr;
    tr.steps = sequence_length(cfg, batch);
    const std::size_t n_layers = cfg.layers.size();
    const std::size_t rows = batch.rows();
    tr.cells.assign(n_layers, {});
    for (std::size_t t = 0; t < tr.steps; ++t) {
        tr.inputs.push_back(timestep(batch, t, cfg.input_dim));
        const Matrix* x = &tr.inputs.back();
        for (std::size_t l = 0; l < n_layers; ++l) {
            const std::size_t H = cfg.layers[l];
            LstmStep s;
            s.gates = matmul(*x, p.tensors[3 * l]);
            if (t > 0) {
                matmul_acc(tr.cells[l][t - 1].h, p.tensors[3 * l + 1], s.gates);
            }
            add_row_broadcast(s.gates, p.tensors[3 * l + 2]);
            s.c = Matrix(rows, H);
            s.tanh_c = Matrix(rows, H);
            s.h = Matrix(rows, H);
            for (std::size_t r = 0; r < rows; ++r) {
                auto a = s.gates.row(r);
                for (std::size_t j = 0; j < H; ++j) {
                    const double i = sigmoid(a[j]);
                    const double f = sigmoid(a[H + j]);
                    const double g = std::tanh(a[2 * H + j]);
                    const double o = sigmoid(a[3 * H + j]);
                    a[j] = i;
                    a[H + j] = f;
                    a[2 * H + j] = g;
                    a[3 * H + j] = o;
                    const double c_prev = t > 0 ? tr.cells[l][t - 1].c(r, j) : 0.0;
                    const double c = f * c_prev + i * g;
                    const double tc = std::tanh(c);
                    s.c(r, j) = c;
                    s.tanh_c(r, j) = tc;
                    s.h(r, j) = o * tc;
                }
            }
            tr.cells[l].push_back(std::move(s));
            x = &tr.cells[l].back().h;
        }
    }
    tr.out = matmul(tr.cells[n_layers - 1].back().h, p.tensors[3 * n_layers]);
    add_row_broadcast(tr.out, p.tensors[3 * n_layers + 1]);
    return tr;
}

}  // namespace

Matrix lstm_forward(const LstmParams& p, const Matrix& batch) { return lstm_trace(p, batch).out; }

Gradients lstm_backward(const LstmParams& p, const Matrix& batch, const Matrix& targets) {
    const LstmTrace tr = lstm_trace(p, batch);
    require_targets(tr.out, targets);
    const RecurrentConfig& cfg = p.config;
    const std::size_t n_layers = cfg.layers.size();
    const std::size_t head = 3 * n_layers;
    const std::size_t rows = batch.rows();

    Gradients g;
    g.loss = mse_loss(tr.out, targets);
    g.grads = zeros_like(p.tensors);

    const Matrix d_out = mse_grad(tr.out, targets);
    g.grads[head] = matmul_tn(tr.cells[n_layers - 1].back().h, d_out);
    g.grads[head + 1] = column_sums(d_out);

    std::vector<Matrix> dh_next(n_layers);
    std::vector<Matrix> dc_next(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        dh_next[l] = Matrix(rows, cfg.layers[l]);
        dc_next[l] = Matrix(rows, cfg.layers[l]);
    }
    for (std::size_t t = tr.steps; t-- > 0;) {
        Matrix from_above = t + 1 == tr.steps ? matmul_nt(d_out, p.tensors[head])
                                              : Matrix(rows, cfg.layers.back());
        for (std::size_t l = n_layers; l-- > 0;) {
            const std::size_t H = cfg.layers[l];
            const LstmStep& s = tr.cells[l][t];
            Matrix d_gates(rows, 4 * H);
            for (std::size_t r = 0; r < rows; ++r) {
                const auto a = s.gates.row(r);
                auto da = d_gates.row(r);
                for (std::size_t j = 0; j < H; ++j) {
                    const double i = a[j];
                    const double f = a[H + j];
                    const double gg = a[2 * H + j];
                    const double o = a[3 * H + j];
                    const double tc = s.tanh_c(r, j);
                    const double c_prev = t > 0 ? tr.cells[l][t - 1].c(r, j) : 0.0;
                    const double dh = from_above(r, j) + dh_next[l](r, j);
                    const double dc = dc_next[l](r, j) + dh * o * (1.0 - tc * tc);
                    da[j] = dc * gg * i * (1.0 - i);
                    da[H + j] = dc * c_prev * f * (1.0 - f);
                    da[2 * H + j] = dc * i * (1.0 - gg * gg);
                    da[3 * H + j] = dh * tc * o * (1.0 - o);
                    dc_next[l](r, j) = dc * f;
                }
            }
            const Matrix& x = l == 0 ? tr.inputs[t] : tr.cells[l - 1][t].h;
            matmul_tn_acc(x, d_gates, g.grads[3 * l]);
            if (t > 0) {
                matmul_tn_acc(tr.cells[l][t - 1].h, d_gates, g.grads[3 * l + 1]);
                dh_next[l] = matmul_nt(d_gates, p.tensors[3 * l + 1]);
            }
            column_sums_acc(d_gates, g.grads[3 * l + 2]);
            if (l > 0) {
                from_above = matmul_nt(d_gates, p.tensors[3 * l]);
            }
        }
    }
    return g;
}

}  // namespace chaosbench
