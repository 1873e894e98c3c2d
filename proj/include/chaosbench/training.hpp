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
#include <iosfwd>
#include <memory>
#include <vector>

#include "chaosbench/dataset.hpp"
#include "chaosbench/models.hpp"
#include "chaosbench/neural.hpp"

namespace chaosbench {

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct AdamState {
    ParamList m;
    ParamList v;
    std::uint64_t t = 0;

    static AdamState zeros_like(const ParamList& params);
};

/// One Adam update with bias correction, applied in place through the active
/// SIMD backend.
void adam_step(ParamList& params, const ParamList& grads, AdamState& state, const TrainConfig& cfg);

struct TrainLog {
    std::vector<double> train_mse;  // per epoch, sample-weighted mean over batches
    std::vector<double> seconds;    // wall clock per epoch
    double final_test_mse = 0.0;
};

/// Trains `model` on split.train and reports the test-set MSE.
///
/// Neural models: every epoch shuffles the training indices with a stream
/// seeded from derive_seed(cfg.seed, {1}) and walks them in batches of
/// cfg.batch_size (the final short batch is kept). Classical models ignore the
/// epoch settings and run their own fit with cfg.seed.
/// Throws NumericError (naming the epoch) on a non-finite loss.
TrainLog fit(Forecaster& model, const SplitDataset& split, const TrainConfig& cfg);

void write_train_log_csv(std::ostream& out, const TrainLog& log);

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

inline constexpr const char* kCheckpointMagic = "CHAOSBENCH-CKPT-1";

struct Checkpoint {
    std::unique_ptr<Forecaster> model;
    TrainConfig train;
};

/// Line-oriented text record: magic, model spec and training config as JSON,
/// then every tensor (or tree) in row-major order with round-trip decimals.
void write_checkpoint(std::ostream& out, const Forecaster& model, const TrainConfig& cfg);
/// Throws FormatError on a bad magic string or malformed body.
Checkpoint read_checkpoint(std::istream& in);

}  // namespace chaosbench
