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
#include <vector>

#include "chaosbench/matrix.hpp"
#include "chaosbench/numerics.hpp"

namespace chaosbench {

/// Ordered list of parameter tensors. Optimizers and checkpoints treat it
/// generically; each model documents its layout.
using ParamList = std::vector<Matrix>;

/// Batch-mean MSE over all entries and its gradient w.r.t. every parameter.
struct Gradients {
    double loss = 0.0;
    ParamList grads;
};

/// Two size profiles for the recurrent models: A is one 10-unit layer, B is the
/// wider two-layer stack (32+24 for the RNN, 50+50 for the LSTM).
enum class Profile { A, B };

std::string_view to_string(Profile p) noexcept;
Profile profile_from_string(std::string_view name);

// ---------------------------------------------------------------------------
// Feed-forward network: input -> hidden1 (relu) -> hidden2 (relu) -> output.
// Layout: W1, b1, W2, b2, W3, b3 with W_l as [fan_in x fan_out], b_l as [1 x fan_out].
// ---------------------------------------------------------------------------

struct FnnConfig {
    std::size_t input_dim = 2;
    std::size_t hidden1 = 64;
    std::size_t hidden2 = 32;
    std::size_t output_dim = 2;
    Activation output = Activation::linear;
};

struct FnnParams {
    FnnConfig config;
    ParamList tensors;

    /// Glorot weights, zero biases.
    static FnnParams init(const FnnConfig& cfg, Rng& rng);
    static FnnParams zeros(const FnnConfig& cfg);
};

Matrix fnn_forward(const FnnParams& p, const Matrix& batch);
Gradients fnn_backward(const FnnParams& p, const Matrix& batch, const Matrix& targets);

// ---------------------------------------------------------------------------
// Recurrent models. A batch row holds N timesteps of `input_dim` features,
// oldest first; hidden (and cell) state starts at zero for every row.
// ---------------------------------------------------------------------------

struct RecurrentConfig {
    std::size_t input_dim = 2;
    std::vector<std::size_t> layers{10};
    std::size_t output_dim = 2;
};

RecurrentConfig rnn_profile(Profile p);
RecurrentConfig lstm_profile(Profile p);

/// Elman network, h_t = tanh(x_t W + h_{t-1} U + b) per layer, linear head on
/// the last top-layer state. Layout: per layer W, U, b; then head V, c.
struct RnnParams {
    RecurrentConfig config;
    ParamList tensors;

    static RnnParams init(const RecurrentConfig& cfg, Rng& rng);
    static RnnParams zeros(const RecurrentConfig& cfg);
};

Matrix rnn_forward(const RnnParams& p, const Matrix& batch);
Gradients rnn_backward(const RnnParams& p, const Matrix& batch, const Matrix& targets);

/// LSTM with gate blocks ordered [input, forget, candidate, output] along the
/// columns of each kernel. Layout: per layer Wx [in x 4H], Wh [H x 4H],
/// b [1 x 4H]; then head V, c. Forget-gate biases start at 1.
struct LstmParams {
    RecurrentConfig config;
    ParamList tensors;

    static LstmParams init(const RecurrentConfig& cfg, Rng& rng);
    static LstmParams zeros(const RecurrentConfig& cfg);
};

Matrix lstm_forward(const LstmParams& p, const Matrix& batch);
Gradients lstm_backward(const LstmParams& p, const Matrix& batch, const Matrix& targets);

/// Mean over all B*k entries of (pred - target)^2.
double mse_loss(const Matrix& pred, const Matrix& target);

}  // namespace chaosbench
