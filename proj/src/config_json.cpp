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

#include "chaosbench/config_json.hpp"

#include <string>

namespace chaosbench {

using nlohmann::json;

void to_json(json& j, const ForestConfig& c) {
    j = json{{"n_trees", c.n_trees},
             {"min_samples_split", c.min_samples_split},
             {"max_depth", c.max_depth},
             {"bootstrap", c.bootstrap},
             {"bootstrap_seed", c.bootstrap_seed}};
}

void from_json(const json& j, ForestConfig& c) {
    c.n_trees = j.value("n_trees", c.n_trees);
    c.min_samples_split = j.value("min_samples_split", c.min_samples_split);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.bootstrap = j.value("bootstrap", c.bootstrap);
    c.bootstrap_seed = j.value("bootstrap_seed", c.bootstrap_seed);
}

void to_json(json& j, const SvrConfig& c) {
    j = json{{"epsilon", c.epsilon}, {"C", c.reg_C},     {"eta0", c.eta0},
             {"decay_epochs", c.decay_epochs},           {"epochs", c.epochs},
             {"seed", c.seed},       {"map_b", c.map_b}};
}

void from_json(const json& j, SvrConfig& c) {
    c.epsilon = j.value("epsilon", c.epsilon);
    c.reg_C = j.value("C", c.reg_C);
    c.eta0 = j.value("eta0", c.eta0);
    c.decay_epochs = j.value("decay_epochs", c.decay_epochs);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    c.map_b = j.value("map_b", c.map_b);
}

void to_json(json& j, const ModelSpec& s) {
    j = json{{"kind", std::string(to_string(s.kind))},
             {"profile", std::string(to_string(s.profile))},
             {"fnn_output", std::string(to_string(s.fnn_output))},
             {"window", s.window},
             {"forest", s.forest},
             {"svr", s.svr}};
}

void from_json(const json& j, ModelSpec& s) {
    s.kind = model_kind_from_string(j.at("kind").get<std::string>());
    s.profile = profile_from_string(j.value("profile", std::string("A")));
    s.fnn_output = activation_from_string(j.value("fnn_output", std::string("linear")));
    s.window = j.value("window", ModelSpec::default_window(s.kind));
    if (j.contains("forest")) s.forest = j.at("forest").get<ForestConfig>();
    if (j.contains("svr")) s.svr = j.at("svr").get<SvrConfig>();
}

void to_json(json& j, const TrainConfig& c) {
    j = json{{"epochs", c.epochs}, {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
             {"beta1", c.beta1},   {"beta2", c.beta2},           {"eps", c.eps},
             {"seed", c.seed}};
}

void from_json(const json& j, TrainConfig& c) {
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.eps = j.value("eps", c.eps);
    c.seed = j.value("seed", c.seed);
}

void to_json(json& j, const PipelineConfig& c) {
    j = json{{"a", c.map.a},
             {"b", c.map.b},
             {"x0", c.initial.x},
             {"y0", c.initial.y},
             {"steps", c.steps},
             {"keep_fraction", c.keep_fraction},
             {"window", c.window.window_len_N},
             {"horizon", c.window.horizon_h},
             {"stride", c.window.stride},
             {"train_fraction", c.train_fraction}};
    if (c.criterion) {
        j["theta"] = c.criterion->theta;
    }
}

}  // namespace chaosbench
