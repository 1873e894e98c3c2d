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


// Acceptance checks 1-10. Each prints one PASS/FAIL line with its measurements;
// the exit status is non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>
#include <vector>

#include "chaosbench/classical.hpp"
#include "chaosbench/evaluation.hpp"
#include "chaosbench/experiments.hpp"
#include "chaosbench/henon.hpp"
#include "chaosbench/io.hpp"
#include "chaosbench/neural.hpp"
#include "chaosbench/training.hpp"

using namespace chaosbench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

fs::path scratch() {
    static const fs::path dir = fs::temp_directory_path() / ("chaosbench_accept_" + std::to_string(::getpid()));
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = "cd '" + scratch().string() + "' && env -u CHAOSBENCH_SEED '" + CHAOSBENCH_CLI +
                            "' " + args + " >>cli.log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') out.push_back(line);
    }
    return out;
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1 ------------------------------------------------------------------------

Outcome map_correctness() {
    const MapParams p;
    const State fp = fixed_point(p);
    const State next = step(fp, p);
    const double residual = std::max(std::abs(next.x - fp.x), std::abs(next.y - fp.y));

    Rng rng(1);
    std::size_t det_exact = 0;
    for (int i = 0; i < 1000; ++i) {
        const State s{rng.uniform(-1.5, 1.5), rng.uniform(-0.45, 0.45)};
        det_exact += jacobian_determinant(s, p) == -p.b ? 1 : 0;
    }
    const Trajectory t = iterate(State{0.1, 0.1}, 10000, p);
    double max_x = 0.0, max_y = 0.0;
    for (const State& s : t.states) {
        max_x = std::max(max_x, std::abs(s.x));
        max_y = std::max(max_y, std::abs(s.y));
    }
    const bool pass = residual < 1e-12 && det_exact == 1000 && max_x <= 1.5 && max_y <= 0.45;
    return {pass, "residual=" + fmt("%.3g", residual) + " det_exact=" + std::to_string(det_exact) +
                      "/1000 max|x|=" + fmt("%.4f", max_x) + " max|y|=" + fmt("%.4f", max_y)};
}

// 2 ------------------------------------------------------------------------

Outcome criterion_oracle() {
    const Trajectory attractor = iterate(State{0.1, 0.1}, 10000);
    Rng rng(2);
    std::size_t compared = 0, mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const State seed = attractor.states[2000 + rng.below(8000)];
        const std::size_t len = 50 + static_cast<std::size_t>(rng.below(451));
        const Trajectory t = iterate(seed, len);
        // Independent orbit and scan.
        std::vector<double> ys;
        double x = seed.x, y = seed.y;
        for (std::size_t n = 0; n < len; ++n) {
            const double nx = 1.0 - 1.4 * x * x + y;
            y = 0.3 * x;
            x = nx;
            ys.push_back(y);
        }
        for (std::size_t T : {1u, 4u, 6u, 8u}) {
            const auto got = label_extreme_events(t, CriterionConfig{0.3, T});
            if (got.size() != len - T) {
                ++mismatches;
                continue;
            }
            for (std::size_t n = 0; n + T < len; ++n) {
                mismatches += got[n] != (ys[n + T] >= 0.3 ? 1 : 0);
                ++compared;
            }
        }
    }
    return {mismatches == 0, std::to_string(compared) + " labels, " + std::to_string(mismatches) + " mismatches"};
}

// 3 ------------------------------------------------------------------------

std::vector<double> flatten(const ParamList& ps) {
    std::vector<double> out;
    for (const Matrix& m : ps) out.insert(out.end(), m.values().begin(), m.values().end());
    return out;
}

template <class Params, class Fwd, class Bwd>
double check_model(const Params& p, const Matrix& x, const Matrix& y, Fwd fwd, Bwd bwd) {
    const std::vector<double> analytic = flatten(bwd(p, x, y).grads);
    auto f = [&](std::span<const double> w) {
        Params q = p;
        std::size_t k = 0;
        for (Matrix& m : q.tensors)
            for (double& v : m.values()) v = w[k++];
        return mse_loss(fwd(q, x), y);
    };
    return grad_check(f, analytic, flatten(p.tensors));
}

Outcome gradient_checks() {
    Rng rng(3);
    Matrix x(4, 6), y(4, 2);
    for (double& v : x.values()) v = rng.uniform(-1.0, 1.0);
    for (double& v : y.values()) v = rng.uniform(-1.0, 1.0);
    std::map<std::string, double> err;
    err["fnn"] = check_model(FnnParams::init(FnnConfig{6, 64, 32, 2, Activation::linear}, rng), x, y,
                             fnn_forward, fnn_backward);
    for (Profile prof : {Profile::A, Profile::B}) {
        const std::string tag(to_string(prof));
        err["rnn" + tag] = check_model(RnnParams::init(rnn_profile(prof), rng), x, y, rnn_forward, rnn_backward);
        err["lstm" + tag] = check_model(LstmParams::init(lstm_profile(prof), rng), x, y, lstm_forward, lstm_backward);
    }
    bool pass = true;
    std::string detail;
    for (const auto& [name, e] : err) {
        pass = pass && e < 1e-5;
        detail += name + "=" + fmt("%.2e", e) + " ";
    }
    detail += "(relative error, denominator floor " + fmt("%g", kGradCheckFloor) + ")";
    return {pass, detail};
}

// 4 ------------------------------------------------------------------------

Outcome optimizer_oracle() {
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    ParamList theta{Matrix{{0.7}}};
    AdamState state = AdamState::zeros_like(theta);
    double p = 0.7, m = 0.0, v = 0.0, worst = 0.0;
    Rng rng(4);
    for (int t = 1; t <= 10; ++t) {
        const double g = rng.uniform(-1.0, 1.0);
        adam_step(theta, ParamList{Matrix{{g}}}, state, cfg);
        m = 0.9 * m + 0.1 * g;
        v = 0.999 * v + 0.001 * g * g;
        p -= 0.05 * (m / (1.0 - std::pow(0.9, t))) / (std::sqrt(v / (1.0 - std::pow(0.999, t))) + 1e-8);
        worst = std::max(worst, std::abs(theta[0](0, 0) - p));
    }
    double first_dev = 0.0;
    for (double g : {1e-3, 0.5, -2.0, 40.0}) {
        TrainConfig c;
        c.learning_rate = 1e-3;
        ParamList q{Matrix{{0.0}}};
        AdamState s = AdamState::zeros_like(q);
        adam_step(q, ParamList{Matrix{{g}}}, s, c);
        first_dev = std::max(first_dev, std::abs(std::abs(q[0](0, 0)) - 1e-3) / 1e-3);
    }
    return {worst <= 1e-15 && first_dev < 1e-4,
            "trace max|diff|=" + fmt("%.3g", worst) + " first-step |dtheta|/lr-1 max=" + fmt("%.3g", first_dev)};
}

// 5 ------------------------------------------------------------------------

std::optional<Split> brute_split(const Matrix& X, const Matrix& Y, const std::vector<std::size_t>& idx) {
    auto sse_of = [&](const std::vector<std::size_t>& part) {
        double total = 0.0;
        for (std::size_t d = 0; d < Y.cols(); ++d) {
            double mean = 0.0;
            for (std::size_t i : part) mean += Y(i, d);
            mean /= static_cast<double>(part.size());
            for (std::size_t i : part) total += (Y(i, d) - mean) * (Y(i, d) - mean);
        }
        return total;
    };
    const double tol = kSplitTieTolerance * sse_of(idx);
    std::optional<Split> best;
    for (std::size_t f = 0; f < X.cols(); ++f) {
        std::set<double> values;
        for (std::size_t i : idx) values.insert(X(i, f));
        const std::vector<double> v(values.begin(), values.end());
        for (std::size_t k = 0; k + 1 < v.size(); ++k) {
            const double t = 0.5 * (v[k] + v[k + 1]);
            std::vector<std::size_t> left, right;
            for (std::size_t i : idx) (X(i, f) <= t ? left : right).push_back(i);
            const double sse = sse_of(left) + sse_of(right);
            if (!best || sse < best->child_sse - tol) best = Split{f, t, sse};
        }
    }
    return best;
}

Outcome cart_oracle() {
    Rng rng(5);
    std::size_t agree = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.below(29));
        const std::size_t p = 1 + static_cast<std::size_t>(rng.below(4));
        Matrix X(n, p), Y(n, 2);
        const bool discrete = trial % 3 == 0;
        for (double& v : X.values()) v = discrete ? static_cast<double>(rng.below(4)) : rng.uniform(-3, 3);
        for (double& v : Y.values()) v = rng.uniform(-1, 1);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        const auto got = best_split(X, Y, idx);
        const auto want = brute_split(X, Y, idx);
        const bool same = got.has_value() == want.has_value() &&
                          (!got || (got->feature == want->feature && got->threshold == want->threshold));
        agree += same ? 1 : 0;
    }
    return {agree == 200, std::to_string(agree) + "/200 splits identical"};
}

// 6 ------------------------------------------------------------------------

Outcome trainability() {
    const SplitDataset split = run_pipeline(PipelineConfig{});
    std::string detail = "train/test=" + std::to_string(split.train.size()) + "/" + std::to_string(split.test.size());
    bool pass = split.train.size() == 1599 && split.test.size() == 400;
    for (ModelKind k : {ModelKind::lstm, ModelKind::fnn}) {
        int good = 0;
        detail += std::string(" ") + std::string(to_string(k)) + "=";
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            TrainConfig cfg;
            cfg.seed = seed;
            auto model = make_model(ModelSpec::defaults(k), derive_seed(seed, {0}));
            const double mse = fit(*model, split, cfg).final_test_mse;
            good += mse < 1e-2 ? 1 : 0;
            detail += fmt("%.2e", mse) + (seed < 3 ? "," : "");
        }
        pass = pass && good >= 2;
    }
    TrainConfig cfg;
    cfg.seed = 1;
    auto rf = make_model(ModelSpec::defaults(ModelKind::forest), derive_seed(1, {0}));
    fit(*rf, split, cfg);
    const double train_mse = regression_metrics(rf->predict(split.train.inputs), split.train).mse_both;
    pass = pass && train_mse < 1e-3;
    detail += " rf_train=" + fmt("%.2e", train_mse);
    return {pass, detail};
}

// 7 ------------------------------------------------------------------------

Outcome heatmap_trend() {
    ExperimentSpec s = ExperimentSpec::defaults(ExperimentKind::mse_heatmap);
    s.master_seed = 1;
    s.output_dir = scratch() / "library";
    s.set_axis("samples", "10000,20000,30000");
    s.set_axis("horizon", "1,5,10");
    s.set_axis("replicate", "0,1,2");
    const GridResult r = run_mse_heatmap(s, RunOptions{workers(), std::nullopt, true});
    if (!r.ok()) return {false, std::to_string(r.failed.size()) + " cells failed: " + r.failed[0].message};
    const auto m = heatmap_matrix(r.rows, {10000, 20000, 30000}, {1, 5, 10});
    std::string detail = "10k: h1=" + fmt("%.3g", m[0][0]) + " h5=" + fmt("%.3g", m[0][1]) +
                         " h10=" + fmt("%.3g", m[0][2]) + "; 30k: h1=" + fmt("%.3g", m[2][0]) +
                         " h10=" + fmt("%.3g", m[2][2]);
    return {m[0][2] > m[0][0], detail};
}

// 8 ------------------------------------------------------------------------

Outcome accuracy_trend() {
    ExperimentSpec s = ExperimentSpec::defaults(ExperimentKind::horizon_accuracy);
    s.master_seed = 1;
    s.output_dir = scratch() / "library";
    s.set_axis("samples", "1000,30000");
    s.set_axis("horizon", "1,4,8");
    s.set_axis("replicate", "0,1,2");
    const GridResult r = run_horizon_accuracy(s, RunOptions{workers(), std::nullopt, true});
    if (!r.ok()) return {false, std::to_string(r.failed.size()) + " cells failed: " + r.failed[0].message};
    bool pass = true;
    std::string detail;
    std::size_t beat_base = 0, at_h1 = 0;
    for (const std::string model : {"fnn", "lstm"}) {
        for (std::size_t n : {1000u, 30000u}) {
            double acc1 = 0.0, acc8 = 0.0;
            int c1 = 0, c8 = 0;
            for (const EvalReport& e : r.rows) {
                if (e.model != model || e.samples != n) continue;
                if (e.horizon == 1) {
                    acc1 += *e.event_accuracy;
                    ++c1;
                    ++at_h1;
                    beat_base += *e.event_accuracy > *e.event_base_rate ? 1 : 0;
                }
                if (e.horizon == 8) {
                    acc8 += *e.event_accuracy;
                    ++c8;
                }
            }
            acc1 /= c1;
            acc8 /= c8;
            pass = pass && acc8 < acc1;
            detail += model + "@" + std::to_string(n) + ": h1=" + fmt("%.3f", acc1) + " h8=" + fmt("%.3f", acc8) + "; ";
        }
    }
    pass = pass && beat_base == at_h1;
    detail += "h1 above base rate " + std::to_string(beat_base) + "/" + std::to_string(at_h1);
    return {pass, detail};
}

// 9 ------------------------------------------------------------------------

Outcome determinism() {
    const int a = run_cli("experiment model_comparison --seed 7 --out det_a");
    const int b = run_cli("experiment model_comparison --seed 7 --out det_b --jobs 3");
    if (a != 0 || b != 0) return {false, "exit codes " + std::to_string(a) + ", " + std::to_string(b)};
    const std::string sa = io::read_text(scratch() / "det_a/model_comparison/summary.csv");
    const std::string sb = io::read_text(scratch() / "det_b/model_comparison/summary.csv");
    return {sa == sb && data_lines(sa).size() == 6,
            std::string(sa == sb ? "summary.csv byte-identical" : "summary.csv differs") + " (" +
                std::to_string(sa.size()) + " bytes, " + std::to_string(data_lines(sa).size() - 1) + " rows)"};
}

// 10 -----------------------------------------------------------------------

Outcome cli_contract() {
    struct Case {
        std::string args;
        int expect;
    };
    const std::vector<Case> cases{
        {"simulate --out t.csv", 0},
        {"simulate --x0 10 --y0 10 --out t_div.csv", 3},
        {"simulate --steps nope", 2},
        {"dataset --out ds", 0},
        {"dataset --window 2 --out ds2", 0},
        {"dataset --bogus", 2},
        {"train --model fnn --epochs 2 --seed 1 --checkpoint f.ckpt", 0},
        {"train --model svr --window 5 --checkpoint s.ckpt", 0},
        {"train --model fnn --window 1 --train-csv ds2/train.csv --test-csv ds2/test.csv", 4},
        {"train --model fnn --epochs 1 --lr 1e300", 5},
        {"train --model perceptron", 2},
        {"train --model lstm --x0 10 --y0 10", 3},
        {"evaluate --checkpoint f.ckpt", 0},
        {"evaluate --checkpoint f.ckpt --test-csv ds2/test.csv", 4},
        {"evaluate --checkpoint missing.ckpt", 1},
        {"evaluate --bogus", 2},
        {"experiment no_such_experiment", 2},
        {"experiment model_comparison --grid colour=red", 2},
        {"experiment model_comparison --grid model=rf,fnn --grid lr=1e300 --out partial", 6},
        {"report det_a/model_comparison", 0},
        {"report missing_dir", 1},
        {"report", 2},
    };
    std::string bad;
    for (const Case& c : cases) {
        const int got = run_cli(c.args);
        if (got != c.expect) bad += " [" + c.args + "] -> " + std::to_string(got) + " (want " + std::to_string(c.expect) + ")";
    }
    const auto full = data_lines(io::read_text(scratch() / "det_a/model_comparison/summary.csv"));
    std::size_t reproduced = 0;
    for (std::size_t cell = 0; cell < 5; ++cell) {
        const std::string out = "cell_" + std::to_string(cell);
        if (run_cli("experiment model_comparison --seed 7 --out " + out + " --cell " + std::to_string(cell)) != 0) continue;
        char id[16];
        std::snprintf(id, sizeof(id), "cell-%03zu", cell);
        const auto row = data_lines(io::read_text(scratch() / out / "model_comparison" / id / "report.csv"));
        // Summary rows append the reference column to the per-cell row.
        if (row.size() == 2 && full.size() == 6 && full[cell + 1].rfind(row[1] + ",", 0) == 0) ++reproduced;
    }
    const bool pass = bad.empty() && reproduced == 5;
    return {pass, std::to_string(cases.size()) + " exit-code cases" + (bad.empty() ? " ok" : " failed:" + bad) +
                      "; --cell rows reproduced " + std::to_string(reproduced) + "/5"};
}

}  // namespace

int main() {
    fs::remove_all(scratch());
    fs::create_directories(scratch());
    struct Check {
        int id;
        std::string name;
        std::function<Outcome()> run;
        double budget_s;  // 0 = no runtime bound
    };
    const std::vector<Check> checks{
        {1, "map correctness", map_correctness, 1.0},
        {2, "criterion oracle equivalence", criterion_oracle, 5.0},
        {3, "gradient checks", gradient_checks, 30.0},
        {4, "optimizer oracle", optimizer_oracle, 0.0},
        {5, "CART oracle equivalence", cart_oracle, 10.0},
        {6, "trainability at desk scale", trainability, 180.0},
        {7, "heatmap trend (reduced scale)", heatmap_trend, 900.0},
        {8, "accuracy trend (reduced scale)", accuracy_trend, 0.0},
        {9, "end-to-end determinism", determinism, 0.0},
        {10, "CLI contract", cli_contract, 0.0},
    };
    int failed = 0;
    for (const Check& c : checks) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("criterion %2d %-32s %s  %s  [%.2fs%s]\n", c.id, c.name.c_str(), pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs,
                    c.budget_s == 0.0 ? "" : (in_time ? (" < " + fmt("%g", c.budget_s) + "s").c_str()
                                                      : (" over " + fmt("%g", c.budget_s) + "s budget").c_str()));
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(checks.size()) - failed, checks.size());
    fs::remove_all(scratch());
    return failed == 0 ? 0 : 1;
}
