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

#include "chaosbench/training.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "chaosbench/errors.hpp"
#include "chaosbench/evaluation.hpp"
#include "chaosbench/io.hpp"
#include "chaosbench/kernels.hpp"

namespace chaosbench {

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be > 0");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ConfigError("Adam betas must lie in [0, 1)");
    }
    if (!(eps > 0.0)) throw ConfigError("Adam eps must be > 0");
}

AdamState AdamState::zeros_like(const ParamList& params) {
    AdamState s;
    for (const Matrix& p : params) {
        s.m.emplace_back(p.rows(), p.cols());
        s.v.emplace_back(p.rows(), p.cols());
    }
    return s;
}

void adam_step(ParamList& params, const ParamList& grads, AdamState& state, const TrainConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size()) {
        throw ShapeError("adam_step: parameter, gradient and state counts differ");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Matrix& p = params[i];
        for (const Matrix* other : std::initializer_list<const Matrix*>{&grads[i], &state.m[i], &state.v[i]}) {
            if (other->rows() != p.rows() || other->cols() != p.cols()) {
                throw ShapeError("adam_step: shape mismatch in tensor " + std::to_string(i));
            }
        }
    }
    state.t += 1;
    const double t = static_cast<double>(state.t);
    const kernels::AdamCoeffs k{cfg.beta1,
                                cfg.beta2,
                                1.0 - cfg.beta1,
                                1.0 - cfg.beta2,
                                1.0 - std::pow(cfg.beta1, t),
                                1.0 - std::pow(cfg.beta2, t),
                                cfg.learning_rate,
                                cfg.eps};
    const auto update = kernels::active().adam_update;
    for (std::size_t i = 0; i < params.size(); ++i) {
        update(params[i].data(), grads[i].data(), state.m[i].data(), state.v[i].data(),
               params[i].size(), k);
    }
}

namespace {

void check_compatible(const Forecaster& model, const SplitDataset& split) {
    for (const WindowedDataset* d : {&split.train, &split.test}) {
        if (d->size() == 0) {
            throw ShapeError("training needs non-empty train and test sets");
        }
        if (d->input_width() != model.input_width()) {
            throw ShapeError(std::string(to_string(model.kind())) + " with window " +
                             std::to_string(model.spec().window) + " expects input width " +
                             std::to_string(model.input_width()) + ", dataset has " +
                             std::to_string(d->input_width()));
        }
    }
}

}  // namespace

TrainLog fit(Forecaster& model, const SplitDataset& split, const TrainConfig& cfg) {
    cfg.validate();
    check_compatible(model, split);
    TrainLog log;
    using clock = std::chrono::steady_clock;

    if (auto* classical = dynamic_cast<ClassicalForecaster*>(&model)) {
        const auto start = clock::now();
        classical->fit(split.train, cfg.seed);
        log.seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
        log.train_mse.push_back(mse_loss(model.predict(split.train.inputs),
                                         split.train.target_matrix()));
        log.final_test_mse = regression_metrics(model.predict(split.test.inputs), split.test).mse_both;
        return log;
    }

    auto& net = dynamic_cast<NeuralForecaster&>(model);
    const Matrix& inputs = split.train.inputs;
    const Matrix targets = split.train.target_matrix();
    const std::size_t n = inputs.rows();
    const std::size_t width = inputs.cols();

    AdamState state = AdamState::zeros_like(net.parameters());
    Rng rng(derive_seed(cfg.seed, {1}));
    std::vector<std::size_t> order(n);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto start = clock::now();
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < n; begin += cfg.batch_size) {
            const std::size_t rows = std::min(cfg.batch_size, n - begin);
            Matrix xb(rows, width);
            Matrix yb(rows, 2);
            for (std::size_t r = 0; r < rows; ++r) {
                const std::size_t src = order[begin + r];
                const auto in = inputs.row(src);
                std::copy(in.begin(), in.end(), xb.row(r).begin());
                yb(r, 0) = targets(src, 0);
                yb(r, 1) = targets(src, 1);
            }
            Gradients g = net.loss_and_gradients(xb, yb);
            if (!std::isfinite(g.loss)) {
                throw NumericError("non-finite training loss in epoch " + std::to_string(epoch + 1));
            }
            adam_step(net.parameters(), g.grads, state, cfg);
            loss_sum += g.loss * static_cast<double>(rows);
        }
        log.train_mse.push_back(loss_sum / static_cast<double>(n));
        log.seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
    }
    for (const Matrix& p : net.parameters()) {
        if (!p.all_finite()) {
            throw NumericError("parameters became non-finite during training");
        }
    }
    net.mark_trained();
    log.final_test_mse = regression_metrics(model.predict(split.test.inputs), split.test).mse_both;
    return log;
}

void write_train_log_csv(std::ostream& out, const TrainLog& log) {
    out << "epoch,train_mse,seconds\n";
    for (std::size_t e = 0; e < log.train_mse.size(); ++e) {
        out << e + 1 << ',' << io::format_double(log.train_mse[e]) << ','
            << io::format_double(log.seconds[e]) << '\n';
    }
}

}  // namespace chaosbench
