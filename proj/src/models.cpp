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

#include "chaosbench/models.hpp"

#include <string>

#include "chaosbench/errors.hpp"

namespace chaosbench {

std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::fnn: return "fnn";
        case ModelKind::rnn: return "rnn";
        case ModelKind::lstm: return "lstm";
        case ModelKind::forest: return "rf";
        case ModelKind::svr: return "svr";
    }
    return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
    if (name == "fnn") return ModelKind::fnn;
    if (name == "rnn") return ModelKind::rnn;
    if (name == "lstm") return ModelKind::lstm;
    if (name == "rf" || name == "forest") return ModelKind::forest;
    if (name == "svr" || name == "svm") return ModelKind::svr;
    throw ConfigError("unknown model '" + std::string(name) + "' (fnn, rnn, lstm, rf, svr)");
}

ModelSpec ModelSpec::defaults(ModelKind k) {
    ModelSpec s;
    s.kind = k;
    s.window = default_window(k);
    return s;
}

std::string ModelSpec::profile_label() const {
    switch (kind) {
        case ModelKind::rnn:
        case ModelKind::lstm: return std::string(to_string(profile));
        case ModelKind::fnn: return std::string(to_string(fnn_output));
        default: return "-";
    }
}

void Forecaster::require_width(const Matrix& inputs) const {
    if (inputs.cols() != input_width()) {
        throw ShapeError(std::string(to_string(kind())) + " expects input width " +
                         std::to_string(input_width()) + " (window " + std::to_string(spec_.window) +
                         "), got " + std::to_string(inputs.cols()));
    }
}

FnnModel::FnnModel(ModelSpec spec, FnnParams params)
    : NeuralForecaster(std::move(spec)), params_(std::move(params)) {}

Gradients FnnModel::loss_and_gradients(const Matrix& inputs, const Matrix& targets) const {
    require_width(inputs);
    return fnn_backward(params_, inputs, targets);
}

Matrix FnnModel::predict(const Matrix& inputs) const {
    require_width(inputs);
    return fnn_forward(params_, inputs);
}

RnnModel::RnnModel(ModelSpec spec, RnnParams params)
    : NeuralForecaster(std::move(spec)), params_(std::move(params)) {}

Gradients RnnModel::loss_and_gradients(const Matrix& inputs, const Matrix& targets) const {
    require_width(inputs);
    return rnn_backward(params_, inputs, targets);
}

Matrix RnnModel::predict(const Matrix& inputs) const {
    require_width(inputs);
    return rnn_forward(params_, inputs);
}

LstmModel::LstmModel(ModelSpec spec, LstmParams params)
    : NeuralForecaster(std::move(spec)), params_(std::move(params)) {}

Gradients LstmModel::loss_and_gradients(const Matrix& inputs, const Matrix& targets) const {
    require_width(inputs);
    return lstm_backward(params_, inputs, targets);
}

Matrix LstmModel::predict(const Matrix& inputs) const {
    require_width(inputs);
    return lstm_forward(params_, inputs);
}

ForestModel::ForestModel(ModelSpec spec, ForestParams params)
    : ClassicalForecaster(std::move(spec)), params_(std::move(params)) {}

void ForestModel::fit(const WindowedDataset& train, std::uint64_t seed) {
    require_width(train.inputs);
    ForestConfig cfg = spec().forest;
    cfg.bootstrap_seed = derive_seed(seed, {2});
    params_ = forest_fit(train, cfg);
    mark_trained();
}

Matrix ForestModel::predict(const Matrix& inputs) const {
    require_width(inputs);
    return forest_predict(params_, inputs);
}

SvrModel::SvrModel(ModelSpec spec, SvrParams params)
    : ClassicalForecaster(std::move(spec)), params_(std::move(params)) {}

void SvrModel::fit(const WindowedDataset& train, std::uint64_t seed) {
    require_width(train.inputs);
    SvrConfig cfg = spec().svr;
    cfg.seed = derive_seed(seed, {3});
    params_ = svr_fit(train, cfg);
    mark_trained();
}

Matrix SvrModel::predict(const Matrix& inputs) const {
    require_width(inputs);
    return svr_predict(params_, inputs);
}

std::unique_ptr<Forecaster> make_model(const ModelSpec& spec, std::uint64_t seed) {
    if (spec.window == 0) {
        throw ConfigError("window length must be >= 1");
    }
    Rng rng(derive_seed(seed, {0}));
    switch (spec.kind) {
        case ModelKind::fnn: {
            FnnConfig cfg;
            cfg.input_dim = 2 * spec.window;
            cfg.output = spec.fnn_output;
            return std::make_unique<FnnModel>(spec, FnnParams::init(cfg, rng));
        }
        case ModelKind::rnn:
            return std::make_unique<RnnModel>(spec, RnnParams::init(rnn_profile(spec.profile), rng));
        case ModelKind::lstm:
            return std::make_unique<LstmModel>(spec,
                                               LstmParams::init(lstm_profile(spec.profile), rng));
        case ModelKind::forest:
            return std::make_unique<ForestModel>(spec);
        case ModelKind::svr:
            return std::make_unique<SvrModel>(spec);
    }
    throw ConfigError("unknown model kind");
}

}  // namespace chaosbench
