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

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "chaosbench/classical.hpp"
#include "chaosbench/dataset.hpp"
#include "chaosbench/neural.hpp"

namespace chaosbench {

enum class ModelKind { fnn, rnn, lstm, forest, svr };

std::string_view to_string(ModelKind k) noexcept;
ModelKind model_kind_from_string(std::string_view name);

/// Everything needed to construct an untrained model.
struct ModelSpec {
    ModelKind kind = ModelKind::lstm;
    Profile profile = Profile::A;                 // rnn / lstm
    Activation fnn_output = Activation::linear;   // fnn
    std::size_t window = 1;                       // N past states per input
    ForestConfig forest;
    SvrConfig svr;

    /// Window length each family uses unless told otherwise (5 for the SVR, 1 otherwise).
    static std::size_t default_window(ModelKind k) noexcept { return k == ModelKind::svr ? 5 : 1; }
    static ModelSpec defaults(ModelKind k);

    /// Short label for reports: A/B for recurrent models, the output activation
    /// for the FNN, "-" otherwise.
    std::string profile_label() const;
};

/// Common surface of all five model families. Predictions are [B x 2] states.
class Forecaster {
public:
    explicit Forecaster(ModelSpec spec) : spec_(std::move(spec)) {}
    virtual ~Forecaster() = default;

    const ModelSpec& spec() const noexcept { return spec_; }
    ModelKind kind() const noexcept { return spec_.kind; }
    std::size_t input_width() const noexcept { return 2 * spec_.window; }
    bool trained() const noexcept { return trained_; }
    void mark_trained() noexcept { trained_ = true; }

    virtual Matrix predict(const Matrix& inputs) const = 0;

protected:
    void require_width(const Matrix& inputs) const;

private:
    ModelSpec spec_;
    bool trained_ = false;
};

/// Models trained by minibatch gradient descent.
class NeuralForecaster : public Forecaster {
public:
    using Forecaster::Forecaster;

    virtual ParamList& parameters() noexcept = 0;
    virtual const ParamList& parameters() const noexcept = 0;
    virtual Gradients loss_and_gradients(const Matrix& inputs, const Matrix& targets) const = 0;
};

/// Models with their own closed fitting procedure.
class ClassicalForecaster : public Forecaster {
public:
    using Forecaster::Forecaster;

    virtual void fit(const WindowedDataset& train, std::uint64_t seed) = 0;
};

class FnnModel final : public NeuralForecaster {
public:
    FnnModel(ModelSpec spec, FnnParams params);

    ParamList& parameters() noexcept override { return params_.tensors; }
    const ParamList& parameters() const noexcept override { return params_.tensors; }
    Gradients loss_and_gradients(const Matrix& inputs, const Matrix& targets) const override;
    Matrix predict(const Matrix& inputs) const override;
    const FnnParams& params() const noexcept { return params_; }

private:
    FnnParams params_;
};

class RnnModel final : public NeuralForecaster {
public:
    RnnModel(ModelSpec spec, RnnParams params);

    ParamList& parameters() noexcept override { return params_.tensors; }
    const ParamList& parameters() const noexcept override { return params_.tensors; }
    Gradients loss_and_gradients(const Matrix& inputs, const Matrix& targets) const override;
    Matrix predict(const Matrix& inputs) const override;

private:
    RnnParams params_;
};

class LstmModel final : public NeuralForecaster {
public:
    LstmModel(ModelSpec spec, LstmParams params);

    ParamList& parameters() noexcept override { return params_.tensors; }
    const ParamList& parameters() const noexcept override { return params_.tensors; }
    Gradients loss_and_gradients(const Matrix& inputs, const Matrix& targets) const override;
    Matrix predict(const Matrix& inputs) const override;

private:
    LstmParams params_;
};

class ForestModel final : public ClassicalForecaster {
public:
    explicit ForestModel(ModelSpec spec) : ClassicalForecaster(std::move(spec)) {}
    ForestModel(ModelSpec spec, ForestParams params);

    void fit(const WindowedDataset& train, std::uint64_t seed) override;
    Matrix predict(const Matrix& inputs) const override;
    const ForestParams& params() const noexcept { return params_; }

private:
    ForestParams params_;
};

class SvrModel final : public ClassicalForecaster {
public:
    explicit SvrModel(ModelSpec spec) : ClassicalForecaster(std::move(spec)) {}
    SvrModel(ModelSpec spec, SvrParams params);

    void fit(const WindowedDataset& train, std::uint64_t seed) override;
    Matrix predict(const Matrix& inputs) const override;
    const SvrParams& params() const noexcept { return params_; }

private:
    SvrParams params_;
};

/// Fresh model; neural weights are drawn from derive_seed(seed, {0}).
std::unique_ptr<Forecaster> make_model(const ModelSpec& spec, std::uint64_t seed);

}  // namespace chaosbench
