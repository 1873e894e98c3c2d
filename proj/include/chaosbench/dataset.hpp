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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "chaosbench/henon.hpp"
#include "chaosbench/matrix.hpp"

namespace chaosbench {

struct WindowConfig {
    std::size_t window_len_N = 1;
    std::size_t horizon_h = 1;
    std::size_t stride = 1;
};

/// Supervised samples cut from one trajectory.
///
/// Row k of `inputs` holds N consecutive states flattened oldest-first as
/// x0,y0,x1,y1,...; `targets[k]` is the state `horizon_h` steps after the last
/// state of that window. `window_start[k]` is the trajectory index of the first
/// state in the window.
struct WindowedDataset {
    Matrix inputs;
    std::vector<State> targets;
    std::optional<std::vector<std::uint8_t>> event_labels;
    std::optional<double> theta;
    WindowConfig config;
    std::vector<std::size_t> window_start;

    std::size_t size() const noexcept { return targets.size(); }
    std::size_t input_width() const noexcept { return inputs.cols(); }
    /// Trajectory index of target k.
    std::size_t target_index(std::size_t k) const noexcept {
        return window_start[k] + config.window_len_N - 1 + config.horizon_h;
    }
    Matrix target_matrix() const;
    /// Samples [begin, end) as a new dataset.
    WindowedDataset slice(std::size_t begin, std::size_t end) const;
};

struct SplitDataset {
    WindowedDataset train;
    WindowedDataset test;
    double split_fraction = 0.8;
};

inline constexpr double kDefaultKeepFraction = 0.2;
inline constexpr double kDefaultTrainFraction = 0.8;

/// floor(fraction * n), tolerant of representation error in `fraction`
/// (0.3 * 10 is 3, not 2.9999...).
std::size_t fraction_count(double fraction, std::size_t n);

/// Last floor(keep_fraction * len) states.
Trajectory trim_transient(const Trajectory& t, double keep_fraction);

/// Orbit length that leaves exactly `samples` states after trimming to `keep_fraction`.
std::size_t steps_for_samples(std::size_t samples, double keep_fraction = kDefaultKeepFraction);

/// Windowed dataset; with a criterion, labels mark targets with y >= theta.
/// The criterion horizon must equal the window horizon.
WindowedDataset build_windows(const Trajectory& t, const WindowConfig& w,
                              const std::optional<CriterionConfig>& c = std::nullopt);

/// First floor(train_fraction * n) samples train, the rest test, no shuffling.
SplitDataset chronological_split(const WindowedDataset& d, double train_fraction);

/// The standard pipeline: iterate, keep the tail, window, split.
struct PipelineConfig {
    MapParams map;
    State initial{0.1, 0.1};
    std::size_t steps = 10'000;
    double keep_fraction = kDefaultKeepFraction;
    WindowConfig window;
    double train_fraction = kDefaultTrainFraction;
    std::optional<CriterionConfig> criterion;
};

SplitDataset run_pipeline(const PipelineConfig& cfg);

/// CSV `n,x,y[,label_T{T}...]` where n is the 1-based step index in the source
/// orbit. With label columns, the last max(T) states (which have no label) are omitted.
void write_trajectory_csv(std::ostream& out, const Trajectory& t, const std::vector<std::size_t>& Ts = {},
                          double theta = 0.3);

/// CSV: `idx,f0..f{2N-1},target_x,target_y[,label]`, preceded by an optional
/// `# window=N horizon=h stride=s [theta=t]` metadata line.
void write_dataset_csv(std::ostream& out, const WindowedDataset& d);
/// Throws FormatError with a line number on malformed rows.
WindowedDataset read_dataset_csv(std::istream& in);

}  // namespace chaosbench
