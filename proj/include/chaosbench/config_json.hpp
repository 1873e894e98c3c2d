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

// JSON mappings for configuration structs, used by checkpoints, experiment
// outputs and the CLI config file.

#include <json.hpp>

#include "chaosbench/dataset.hpp"
#include "chaosbench/models.hpp"
#include "chaosbench/training.hpp"

namespace chaosbench {

void to_json(nlohmann::json& j, const ForestConfig& c);
void from_json(const nlohmann::json& j, ForestConfig& c);
void to_json(nlohmann::json& j, const SvrConfig& c);
void from_json(const nlohmann::json& j, SvrConfig& c);
void to_json(nlohmann::json& j, const ModelSpec& s);
void from_json(const nlohmann::json& j, ModelSpec& s);
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const PipelineConfig& c);

}  // namespace chaosbench
