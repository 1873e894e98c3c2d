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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chaosbench/evaluation.hpp"
#include "chaosbench/models.hpp"

namespace chaosbench {

enum class ExperimentKind { attractor_criterion, model_comparison, sample_size_sweep, horizon_accuracy, mse_heatmap };

std::string_view to_string(ExperimentKind k) noexcept;
ExperimentKind experiment_kind_from_string(std::string_view name);

/// Grid axes and scalar settings share one map; every entry is a non-empty list.
///
/// Cell axes, in enumeration order (first varies slowest):
///   model, profile, samples, horizon
/// Replicates run inside a cell: axis `replicate` lists replicate indices.
/// Single-valued settings: epochs, batch, lr, theta, fnn_output, steps (attractor),
/// T (attractor, a list).
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::model_comparison;
    std::map<std::string, std::vector<nlohmann::json>> grid;
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir = "results";

    /// Default grid for `kind`.
    static ExperimentSpec defaults(ExperimentKind kind);

    /// Throws ConfigError on unknown axes, empty lists or ill-typed values.
    void validate() const;

    /// Replaces one axis, parsing comma-separated text ("1,5,10", "fnn,lstm").
    /// Throws ConfigError and leaves the spec unchanged if the result is invalid.
    void set_axis(const std::string& axis, const std::string& values);

    /// Everything that influences results (excludes output_dir).
    nlohmann::json resolved() const;
    static ExperimentSpec from_json(const nlohmann::json& j);
};

struct GridCell {
    std::size_t index = 0;
    std::string id;  // directory name, e.g. "cell-003"
    ModelSpec model;
    std::size_t samples = 0;
    std::size_t horizon = 1;
    std::vector<std::size_t> replicates;
};

std::vector<GridCell> enumerate_cells(const ExperimentSpec& spec);

/// One orbit point with per-T criterion flags (attractor experiment).
struct PointRecord {
    double x = 0.0;
    double y = 0.0;
    std::vector<std::uint8_t> satisfied;
};

struct CellFailure {
    std::size_t index = 0;
    std::string id;
    std::string message;
};

struct GridResult {
    ExperimentKind kind = ExperimentKind::model_comparison;
    std::vector<EvalReport> rows;
    std::vector<std::size_t> T_values;  // attractor only
    std::vector<PointRecord> points;    // attractor only
    std::vector<CellFailure> failed;
    nlohmann::json provenance;

    bool ok() const noexcept { return failed.empty(); }
};

struct RunOptions {
    std::size_t jobs = 1;
    std::optional<std::size_t> cell;  // run only this cell index
    bool write_outputs = true;
};

/// Seed of replicate `r` in cell `c`.
std::uint64_t cell_seed(std::uint64_t master, std::size_t cell_index, std::size_t replicate);

/// Trains and scores one cell. Throws on failure.
std::vector<EvalReport> run_cell(const ExperimentSpec& spec, const GridCell& cell);

/// Runs the grid (or one cell), writes the output tree under
/// output_dir/<experiment>/ and returns the merged rows. Cell failures are
/// collected rather than thrown.
GridResult run_experiment(const ExperimentSpec& spec, const RunOptions& opt = {});

GridResult run_attractor_criterion(const ExperimentSpec& spec, const RunOptions& opt = {});
GridResult run_model_comparison(const ExperimentSpec& spec, const RunOptions& opt = {});
GridResult run_sample_size_sweep(const ExperimentSpec& spec, const RunOptions& opt = {});
GridResult run_horizon_accuracy(const ExperimentSpec& spec, const RunOptions& opt = {});
GridResult run_mse_heatmap(const ExperimentSpec& spec, const RunOptions& opt = {});

/// Orbit points with flags for each T (no file output).
std::vector<PointRecord> attractor_points(const ExperimentSpec& spec, std::vector<std::size_t>* T_out = nullptr);

/// Reference MSE listed next to each model in the comparison summary.
std::optional<double> reference_mse(std::string_view model);

/// Rewrites aggregate.csv (where applicable) and figure.svg from an existing
/// experiment directory's config.json and summary.csv.
void render_report(const std::filesystem::path& experiment_dir);

/// Mean mse_both per (samples, horizon) cell; rows follow `samples`, columns `horizons`.
std::vector<std::vector<double>> heatmap_matrix(std::span<const EvalReport> rows,
                                                const std::vector<std::size_t>& samples,
                                                const std::vector<std::size_t>& horizons);

}  // namespace chaosbench
