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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chaosbench/errors.hpp"
#include "chaosbench/evaluation.hpp"
#include "chaosbench/training.hpp"

using namespace chaosbench;

namespace {

SplitDataset default_split(std::size_t window = 1) {
    PipelineConfig cfg;
    cfg.window.window_len_N = window;
    return run_pipeline(cfg);
}

std::string checkpoint_text(const Forecaster& m, const TrainConfig& cfg) {
    std::ostringstream out;
    write_checkpoint(out, m, cfg);
    return out.str();
}

}  // namespace

TEST_CASE("adam matches a hand recurrence over ten steps") {
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    Rng rng(7);
    ParamList params{Matrix(3, 4)};
    for (double& p : params[0].values()) p = rng.uniform(-1.0, 1.0);
    AdamState state = AdamState::zeros_like(params);

    std::vector<double> theta(params[0].values().begin(), params[0].values().end());
    std::vector<double> m(theta.size(), 0.0), v(theta.size(), 0.0);
    for (int t = 1; t <= 10; ++t) {
        ParamList grads{Matrix(3, 4)};
        for (double& g : grads[0].values()) g = rng.uniform(-2.0, 2.0);
        adam_step(params, grads, state, cfg);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double g = grads[0].values()[i];
            m[i] = 0.9 * m[i] + 0.1 * g;
            v[i] = 0.999 * v[i] + 0.001 * g * g;
            const double mh = m[i] / (1.0 - std::pow(0.9, t));
            const double vh = v[i] / (1.0 - std::pow(0.999, t));
            theta[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
        }
        for (std::size_t i = 0; i < theta.size(); ++i) {
            CHECK(std::abs(params[0].values()[i] - theta[i]) <= 1e-15 * std::max(1.0, std::abs(theta[i])));
        }
    }
    CHECK(state.t == 10);
}

TEST_CASE("first adam step moves each parameter by about lr") {
    TrainConfig cfg;
    cfg.learning_rate = 0.001;
    ParamList params{Matrix{{0.5, -0.5, 0.0}}};
    const ParamList grads{Matrix{{3.0, -0.2, 1e-3}}};
    AdamState state = AdamState::zeros_like(params);
    adam_step(params, grads, state, cfg);
    CHECK(params[0](0, 0) == doctest::Approx(0.5 - 0.001).epsilon(1e-6));
    CHECK(params[0](0, 1) == doctest::Approx(-0.5 + 0.001).epsilon(1e-6));
    CHECK(params[0](0, 2) == doctest::Approx(-0.001).epsilon(1e-4));
}

TEST_CASE("zero gradients leave parameters unchanged") {
    TrainConfig cfg;
    ParamList params{Matrix{{1.25, -3.0}, {0.0, 7.5}}};
    const ParamList before = params;
    const ParamList grads{Matrix(2, 2)};
    AdamState state = AdamState::zeros_like(params);
    for (int i = 0; i < 5; ++i) adam_step(params, grads, state, cfg);
    CHECK(params[0] == before[0]);
}

TEST_CASE("adam rejects mismatched shapes") {
    TrainConfig cfg;
    ParamList params{Matrix(2, 2)};
    AdamState state = AdamState::zeros_like(params);
    CHECK_THROWS_AS(adam_step(params, ParamList{Matrix(2, 3)}, state, cfg), ShapeError);
    CHECK_THROWS_AS(adam_step(params, ParamList{}, state, cfg), ShapeError);
}

TEST_CASE("train config validation") {
    TrainConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.learning_rate = std::nan("");
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.beta1 = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    const SplitDataset split = default_split();
    auto model = make_model(ModelSpec::defaults(ModelKind::fnn), 1);
    cfg = TrainConfig{};
    cfg.epochs = 0;
    CHECK_THROWS_AS(fit(*model, split, cfg), ConfigError);
}

TEST_CASE("fit rejects a dataset of the wrong width") {
    const SplitDataset split = default_split(2);
    auto model = make_model(ModelSpec::defaults(ModelKind::fnn), 1);
    CHECK_THROWS_AS(fit(*model, split, TrainConfig{}), ShapeError);
}

TEST_CASE("default fnn reaches a small test error") {
    const SplitDataset split = default_split();
    TrainConfig cfg;
    cfg.seed = 1;
    auto model = make_model(ModelSpec::defaults(ModelKind::fnn), derive_seed(cfg.seed, {0}));
    const TrainLog log = fit(*model, split, cfg);
    CHECK(log.train_mse.size() == cfg.epochs);
    CHECK(log.seconds.size() == cfg.epochs);
    CHECK(log.final_test_mse < 1e-2);
    CHECK(log.train_mse.back() < log.train_mse.front());
    CHECK(log.final_test_mse == evaluate_regression(*model, split.test).mse_both);
    CHECK(model->trained());
}

TEST_CASE("training is deterministic for a fixed seed") {
    const SplitDataset split = default_split();
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.seed = 42;
    for (ModelKind k : {ModelKind::fnn, ModelKind::rnn, ModelKind::lstm}) {
        auto a = make_model(ModelSpec::defaults(k), derive_seed(cfg.seed, {0}));
        auto b = make_model(ModelSpec::defaults(k), derive_seed(cfg.seed, {0}));
        const TrainLog la = fit(*a, split, cfg);
        const TrainLog lb = fit(*b, split, cfg);
        CHECK(la.train_mse == lb.train_mse);
        CHECK(la.final_test_mse == lb.final_test_mse);
        CHECK(checkpoint_text(*a, cfg) == checkpoint_text(*b, cfg));
    }
    cfg.seed = 43;
    auto c = make_model(ModelSpec::defaults(ModelKind::fnn), derive_seed(42, {0}));
    auto d = make_model(ModelSpec::defaults(ModelKind::fnn), derive_seed(42, {0}));
    TrainConfig other = cfg;
    other.seed = 42;
    fit(*c, split, cfg);
    fit(*d, split, other);
    CHECK(checkpoint_text(*c, cfg) != checkpoint_text(*d, cfg));
}

TEST_CASE("one small adam step lowers the batch loss") {
    const SplitDataset split = default_split();
    Matrix xb(64, 2), yb(64, 2);
    const Matrix targets = split.train.target_matrix();
    for (std::size_t r = 0; r < 64; ++r) {
        xb(r, 0) = split.train.inputs(r, 0);
        xb(r, 1) = split.train.inputs(r, 1);
        yb(r, 0) = targets(r, 0);
        yb(r, 1) = targets(r, 1);
    }
    TrainConfig cfg;
    cfg.learning_rate = 1e-4;
    for (ModelKind k : {ModelKind::fnn, ModelKind::rnn, ModelKind::lstm}) {
        auto model = make_model(ModelSpec::defaults(k), 5);
        auto& net = dynamic_cast<NeuralForecaster&>(*model);
        const Gradients g = net.loss_and_gradients(xb, yb);
        AdamState state = AdamState::zeros_like(net.parameters());
        adam_step(net.parameters(), g.grads, state, cfg);
        const Gradients after = net.loss_and_gradients(xb, yb);
        CHECK_MESSAGE(after.loss < g.loss, to_string(k));
    }
}

TEST_CASE("epoch shuffle is a permutation") {
    Rng rng(derive_seed(9, {1}));
    for (std::size_t n : {1u, 2u, 17u, 1599u}) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        std::vector<std::size_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n; ++i) CHECK(sorted[i] == i);
    }
}

TEST_CASE("classical models train through fit") {
    const SplitDataset split = default_split();
    ModelSpec rf = ModelSpec::defaults(ModelKind::forest);
    rf.forest.n_trees = 10;
    auto forest = make_model(rf, 3);
    const TrainLog log = fit(*forest, split, TrainConfig{});
    CHECK(log.train_mse.size() == 1);
    CHECK(log.final_test_mse < 1e-2);

    auto svr = make_model(ModelSpec::defaults(ModelKind::svr), 3);
    CHECK_THROWS_AS(fit(*svr, split, TrainConfig{}), ShapeError);
    const SplitDataset split5 = default_split(5);
    const TrainLog slog = fit(*svr, split5, TrainConfig{});
    CHECK(std::isfinite(slog.final_test_mse));
}

TEST_CASE("checkpoint round trip is byte identical") {
    const SplitDataset split1 = default_split();
    const SplitDataset split5 = default_split(5);
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.seed = 11;
    for (ModelKind k : {ModelKind::fnn, ModelKind::rnn, ModelKind::lstm, ModelKind::forest,
                        ModelKind::svr}) {
        ModelSpec spec = ModelSpec::defaults(k);
        spec.forest.n_trees = 5;
        if (k == ModelKind::rnn || k == ModelKind::lstm) spec.profile = Profile::B;
        auto model = make_model(spec, 4);
        const SplitDataset& split = spec.window == 5 ? split5 : split1;
        fit(*model, split, cfg);
        const std::string text = checkpoint_text(*model, cfg);
        CHECK(text.rfind(kCheckpointMagic, 0) == 0);
        std::istringstream in(text);
        const Checkpoint ck = read_checkpoint(in);
        CHECK(ck.model->kind() == k);
        CHECK(ck.model->spec().profile == spec.profile);
        CHECK(ck.train.seed == cfg.seed);
        CHECK(ck.train.epochs == cfg.epochs);
        CHECK(checkpoint_text(*ck.model, ck.train) == text);
        CHECK(ck.model->predict(split.test.inputs) == model->predict(split.test.inputs));
    }
}

TEST_CASE("malformed checkpoints are rejected") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_checkpoint(empty), FormatError);
    std::istringstream bad_magic("NOT-A-CHECKPOINT\n");
    CHECK_THROWS_AS(read_checkpoint(bad_magic), FormatError);

    auto model = make_model(ModelSpec::defaults(ModelKind::fnn), 1);
    const std::string text = checkpoint_text(*model, TrainConfig{});
    std::istringstream truncated(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(read_checkpoint(truncated), FormatError);
}

TEST_CASE("train log csv") {
    TrainLog log;
    log.train_mse = {0.5, 0.25};
    log.seconds = {0.1, 0.2};
    std::ostringstream out;
    write_train_log_csv(out, log);
    CHECK(out.str() == "epoch,train_mse,seconds\n1,0.5,0.1\n2,0.25,0.2\n");
}
