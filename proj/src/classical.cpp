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

#include "chaosbench/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "chaosbench/errors.hpp"
#include "chaosbench/numerics.hpp"

namespace chaosbench {

namespace {

/// Mean of `v` (reordered in place): sorted Neumaier summation, so the result
/// is independent of input order and within about one ulp of the exact mean.
/// Identical values return that value exactly.
double sorted_mean(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    if (v.front() == v.back()) {
        return v.front();
    }
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(v.size());
}

}  // namespace

// ===========================================================================
// CART
// ===========================================================================

std::array<double, 2> Tree::predict(std::span<const double> x) const {
    std::uint32_t at = 0;
    while (!nodes[at].is_leaf()) {
        const TreeNode& n = nodes[at];
        at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[at].value;
}

std::optional<Split> best_split(const Matrix& inputs, const Matrix& targets,
                                std::span<const std::size_t> idx) {
    const std::size_t n = idx.size();
    if (n < 2) {
        return std::nullopt;
    }
    const std::size_t dims = targets.cols();
    std::vector<std::size_t> order(idx.begin(), idx.end());
    // prefix[k], suffix[k]: sums over order[0..k) and order[k..n).
    std::vector<double> pre_sum((n + 1) * dims), pre_sq((n + 1) * dims);
    std::vector<double> suf_sum((n + 1) * dims), suf_sq((n + 1) * dims);

    // Centering on the node mean keeps sum-of-squares cancellation proportional
    // to the node's own spread rather than to the magnitude of the targets.
    std::vector<double> centre(dims, 0.0);
    for (std::size_t i : idx) {
        for (std::size_t d = 0; d < dims; ++d) centre[d] += targets(i, d);
    }
    double node_sse = 0.0;
    for (std::size_t d = 0; d < dims; ++d) centre[d] /= static_cast<double>(n);
    for (std::size_t i : idx) {
        for (std::size_t d = 0; d < dims; ++d) {
            const double c = targets(i, d) - centre[d];
            node_sse += c * c;
        }
    }
    const double tie = kSplitTieTolerance * node_sse;

    std::optional<Split> best;
    for (std::size_t f = 0; f < inputs.cols(); ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = inputs(a, f);
            const double vb = inputs(b, f);
            return va < vb || (va == vb && a < b);
        });
        if (inputs(order.front(), f) == inputs(order.back(), f)) {
            continue;
        }
        for (std::size_t d = 0; d < dims; ++d) {
            pre_sum[d] = pre_sq[d] = 0.0;
            suf_sum[n * dims + d] = suf_sq[n * dims + d] = 0.0;
        }
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t d = 0; d < dims; ++d) {
                const double t = targets(order[k], d) - centre[d];
                pre_sum[(k + 1) * dims + d] = pre_sum[k * dims + d] + t;
                pre_sq[(k + 1) * dims + d] = pre_sq[k * dims + d] + t * t;
            }
        }
        for (std::size_t k = n; k-- > 0;) {
            for (std::size_t d = 0; d < dims; ++d) {
                const double t = targets(order[k], d) - centre[d];
                suf_sum[k * dims + d] = suf_sum[(k + 1) * dims + d] + t;
                suf_sq[k * dims + d] = suf_sq[(k + 1) * dims + d] + t * t;
            }
        }
        for (std::size_t k = 1; k < n; ++k) {
            const double lo = inputs(order[k - 1], f);
            const double hi = inputs(order[k], f);
            if (lo == hi) {
                continue;
            }
            const double n_left = static_cast<double>(k);
            const double n_right = static_cast<double>(n - k);
            double sse = 0.0;
            for (std::size_t d = 0; d < dims; ++d) {
                const double sl = pre_sum[k * dims + d];
                const double sr = suf_sum[k * dims + d];
                sse += pre_sq[k * dims + d] - sl * sl / n_left;
                sse += suf_sq[k * dims + d] - sr * sr / n_right;
            }
            if (!best || sse < best->child_sse - tie) {
                best = Split{f, 0.5 * (lo + hi), sse};
            }
        }
    }
    return best;
}

namespace {

struct TreeBuilder {
    const Matrix& inputs;
    const Matrix& targets;
    const ForestConfig& cfg;
    Tree tree;

    std::array<double, 2> mean(std::span<const std::size_t> idx) const {
        std::vector<double> xs, ys;
        xs.reserve(idx.size());
        ys.reserve(idx.size());
        for (std::size_t i : idx) {
            xs.push_back(targets(i, 0));
            ys.push_back(targets(i, 1));
        }
        return {sorted_mean(xs), sorted_mean(ys)};
    }

    bool pure(std::span<const std::size_t> idx) const {
        for (std::size_t i : idx) {
            if (targets(i, 0) != targets(idx[0], 0) || targets(i, 1) != targets(idx[0], 1)) {
                return false;
            }
        }
        return true;
    }

    std::uint32_t grow(std::vector<std::size_t>& idx, std::size_t depth) {
        const auto at = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        const bool depth_capped = cfg.max_depth != 0 && depth >= cfg.max_depth;
        std::optional<Split> split;
        if (!depth_capped && idx.size() >= cfg.min_samples_split && !pure(idx)) {
            split = best_split(inputs, targets, idx);
        }
        if (!split) {
            tree.nodes[at].value = mean(idx);
            return at;
        }
        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            (inputs(i, split->feature) <= split->threshold ? left : right).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();
        tree.nodes[at].feature = static_cast<std::int32_t>(split->feature);
        tree.nodes[at].threshold = split->threshold;
        const std::uint32_t l = grow(left, depth + 1);
        const std::uint32_t r = grow(right, depth + 1);
        tree.nodes[at].left = l;
        tree.nodes[at].right = r;
        return at;
    }
};

}  // namespace

Tree fit_tree(const Matrix& inputs, const Matrix& targets, std::span<const std::size_t> idx,
              const ForestConfig& cfg) {
    if (idx.empty()) {
        throw ShapeError("cannot fit a tree on zero samples");
    }
    if (targets.cols() != 2) {
        throw ShapeError("trees predict 2-column targets");
    }
    TreeBuilder b{inputs, targets, cfg, {}};
    std::vector<std::size_t> root(idx.begin(), idx.end());
    b.grow(root, 0);
    return std::move(b.tree);
}

ForestParams forest_fit(const WindowedDataset& train, const ForestConfig& cfg) {
    if (train.size() < 2) {
        throw ShapeError("random forest needs at least 2 training samples, got " +
                         std::to_string(train.size()));
    }
    if (cfg.n_trees == 0) {
        throw ConfigError("random forest needs at least one tree");
    }
    const Matrix targets = train.target_matrix();
    const std::size_t n = train.size();

    ForestParams p;
    p.config = cfg;
    p.input_width = train.input_width();
    p.trees.resize(cfg.n_trees);

    auto fit_one = [&](std::size_t t) {
        std::vector<std::size_t> idx(n);
        if (cfg.bootstrap) {
            Rng rng(derive_seed(cfg.bootstrap_seed, {t}));
            for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
        } else {
            std::iota(idx.begin(), idx.end(), std::size_t{0});
        }
        p.trees[t] = fit_tree(train.inputs, targets, idx, cfg);
    };

    const std::size_t workers =
        std::min<std::size_t>(cfg.n_trees, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t t = 0; t < cfg.n_trees; ++t) fit_one(t);
        return p;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < cfg.n_trees; t += workers) fit_one(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return p;
}

Matrix forest_predict(const ForestParams& p, const Matrix& inputs) {
    if (p.trees.empty()) {
        throw ConfigError("forest has no trees");
    }
    if (inputs.cols() != p.input_width) {
        throw ShapeError("forest trained on width " + std::to_string(p.input_width) + ", got " +
                         std::to_string(inputs.cols()));
    }
    Matrix out(inputs.rows(), 2);
    std::vector<double> xs(p.trees.size()), ys(p.trees.size());
    for (std::size_t r = 0; r < inputs.rows(); ++r) {
        const auto row = inputs.row(r);
        for (std::size_t t = 0; t < p.trees.size(); ++t) {
            const auto v = p.trees[t].predict(row);
            xs[t] = v[0];
            ys[t] = v[1];
        }
        out(r, 0) = sorted_mean(xs);
        out(r, 1) = sorted_mean(ys);
    }
    return out;
}

// ===========================================================================
// Linear SVR
// ===========================================================================

namespace {

double predict_x(const SvrParams& p, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += p.w[j] * x[j];
    return s + p.bias;
}

}  // namespace

double svr_objective(const SvrParams& p, const Matrix& inputs, std::span<const double> targets) {
    double loss = 0.0;
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
        const double r = predict_x(p, inputs.row(i)) - targets[i];
        loss += std::max(0.0, std::abs(r) - p.epsilon_tube);
    }
    double norm = 0.0;
    for (double v : p.w) norm += v * v;
    return p.reg_C * loss + 0.5 * norm;
}

SvrParams svr_fit(const Matrix& inputs, std::span<const double> targets, const SvrConfig& cfg) {
    if (inputs.rows() == 0) {
        throw ShapeError("SVR needs at least one training sample");
    }
    if (targets.size() != inputs.rows()) {
        throw ShapeError("SVR targets do not match inputs");
    }
    if (!(cfg.epsilon >= 0.0) || !(cfg.reg_C > 0.0) || !(cfg.eta0 > 0.0) || cfg.epochs == 0 ||
        !(cfg.decay_epochs > 0.0)) {
        throw ConfigError("SVR needs epsilon >= 0, C > 0, eta0 > 0, decay > 0 and epochs >= 1");
    }
    const std::size_t n = inputs.rows();
    const std::size_t d = inputs.cols();

    SvrParams cur;
    cur.w.assign(d, 0.0);
    cur.epsilon_tube = cfg.epsilon;
    cur.reg_C = cfg.reg_C;
    cur.map_b = cfg.map_b;
    SvrParams best = cur;
    double best_obj = svr_objective(best, inputs, targets);

    const double shrink = 1.0 / (cfg.reg_C * static_cast<double>(n));
    Rng rng(cfg.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad(d);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double eta = cfg.eta0 / (1.0 + static_cast<double>(epoch) / cfg.decay_epochs);
        rng.shuffle(order);
        for (std::size_t i : order) {
            const auto x = inputs.row(i);
            const double r = predict_x(cur, x) - targets[i];
            const double s = std::abs(r) > cfg.epsilon ? (r > 0.0 ? 1.0 : -1.0) : 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                cur.w[j] -= eta * (s * x[j] + shrink * cur.w[j]);
            }
            cur.bias -= eta * s;
        }
        const double obj = svr_objective(cur, inputs, targets);
        if (!std::isfinite(obj)) {
            throw NumericError("SVR objective became non-finite at epoch " + std::to_string(epoch));
        }
        if (obj < best_obj) {
            best_obj = obj;
            best.w = cur.w;
            best.bias = cur.bias;
        }
        best.objective_history.push_back(best_obj);
    }
    return best;
}

SvrParams svr_fit(const WindowedDataset& train, const SvrConfig& cfg) {
    std::vector<double> tx(train.size());
    for (std::size_t k = 0; k < train.size(); ++k) tx[k] = train.targets[k].x;
    return svr_fit(train.inputs, tx, cfg);
}

State svr_predict_next_state(const SvrParams& p, std::span<const double> window) {
    if (window.size() != p.w.size() || window.size() < 2 || window.size() % 2 != 0) {
        throw ShapeError("SVR expects window width " + std::to_string(p.w.size()) + ", got " +
                         std::to_string(window.size()));
    }
    const double x_last = window[window.size() - 2];
    return {predict_x(p, window), p.map_b * x_last};
}

Matrix svr_predict(const SvrParams& p, const Matrix& inputs) {
    Matrix out(inputs.rows(), 2);
    for (std::size_t r = 0; r < inputs.rows(); ++r) {
        const State s = svr_predict_next_state(p, inputs.row(r));
        out(r, 0) = s.x;
        out(r, 1) = s.y;
    }
    return out;
}

}  // namespace chaosbench
