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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chaosbench/dataset.hpp"
#include "chaosbench/matrix.hpp"

namespace chaosbench {

// ---------------------------------------------------------------------------
// Random forest of multi-output CART regression trees.
// ---------------------------------------------------------------------------

/// Flat tree node. `feature < 0` marks a leaf carrying `value`; internal nodes
/// send samples with x[feature] <= threshold to `left`.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::array<double, 2> value{0.0, 0.0};

    bool is_leaf() const noexcept { return feature < 0; }
};

/// Nodes in preorder; nodes[0] is the root.
struct Tree {
    std::vector<TreeNode> nodes;

    std::array<double, 2> predict(std::span<const double> x) const;
};

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t min_samples_split = 2;
    std::size_t max_depth = 0;  // 0 = unlimited
    bool bootstrap = true;
    std::uint64_t bootstrap_seed = 0;
};

struct ForestParams {
    ForestConfig config;
    std::size_t input_width = 0;
    std::vector<Tree> trees;
};

/// A chosen split and the summed squared error of its two children.
struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double child_sse = 0.0;

    friend bool operator==(const Split&, const Split&) = default;
};

/// Best split of the samples `idx` by exhaustive scan: every feature, every
/// midpoint between consecutive distinct sorted values. Minimizes the total
/// squared error of both children summed over the target columns; ties (see
/// kSplitTieTolerance) go to the lowest feature, then the lowest threshold.
/// Empty when every feature is constant over `idx`.
std::optional<Split> best_split(const Matrix& inputs, const Matrix& targets,
                                std::span<const std::size_t> idx);

/// Candidates whose child error differs by less than this fraction of the node's
/// own squared error count as tied.
inline constexpr double kSplitTieTolerance = 1e-10;

/// Grows one tree on the given (possibly repeated) sample indices.
Tree fit_tree(const Matrix& inputs, const Matrix& targets, std::span<const std::size_t> idx,
              const ForestConfig& cfg);

/// Bootstrap ensemble; tree i resamples with seed derive_seed(bootstrap_seed, {i}).
ForestParams forest_fit(const WindowedDataset& train, const ForestConfig& cfg);

/// Per-sample mean of tree outputs. Leaf values are sorted and summed with
/// compensation, so the result does not depend on the order of `trees`.
Matrix forest_predict(const ForestParams& p, const Matrix& inputs);

// ---------------------------------------------------------------------------
// Linear epsilon-insensitive support vector regression on the x coordinate.
// ---------------------------------------------------------------------------

struct SvrConfig {
    double epsilon = 0.1;
    double reg_C = 1.0;
    double eta0 = 0.01;
    double decay_epochs = 10.0;  // K in eta_k = eta0 / (1 + k / K), k = epoch index
    std::size_t epochs = 200;
    std::uint64_t seed = 0;
    double map_b = 0.3;  // y of the next state is map_b * (last x in the window)
};

struct SvrParams {
    std::vector<double> w;
    double bias = 0.0;
    double epsilon_tube = 0.1;
    double reg_C = 1.0;
    double map_b = 0.3;
    /// Objective after each epoch (best iterate so far).
    std::vector<double> objective_history;
};

/// C * sum max(0, |w.x + b - t| - eps) + 0.5 |w|^2 over rows of `inputs`.
double svr_objective(const SvrParams& p, const Matrix& inputs, std::span<const double> targets);

/// Primal stochastic subgradient descent on the objective scaled by 1/(C n)
/// (same minimizer), one seeded shuffle per epoch. After each epoch the iterate
/// is kept only if it lowers the objective, so the returned history never
/// increases.
SvrParams svr_fit(const Matrix& inputs, std::span<const double> targets, const SvrConfig& cfg);
SvrParams svr_fit(const WindowedDataset& train, const SvrConfig& cfg);

/// x from the linear model, y = map_b * (most recent x in the window).
State svr_predict_next_state(const SvrParams& p, std::span<const double> window);
Matrix svr_predict(const SvrParams& p, const Matrix& inputs);

}  // namespace chaosbench
