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

// chaosbench command-line driver.
//
// Exit codes: 0 ok, 1 I/O or format error, 2 usage, 3 divergence, 4 shape,
// 5 numeric, 6 partial grid.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chaosbench/config_json.hpp"
#include "chaosbench/dataset.hpp"
#include "chaosbench/errors.hpp"
#include "chaosbench/evaluation.hpp"
#include "chaosbench/experiments.hpp"
#include "chaosbench/io.hpp"
#include "chaosbench/training.hpp"

namespace cb = chaosbench;
using nlohmann::json;

namespace {

/// Reads a JSON object whose keys mirror long flag names. Nested objects
/// address subcommands: {"train": {"model": "lstm"}}.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw CLI::FileError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::FileError("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        walk(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

    static void walk(const json& obj, const std::vector<std::string>& parents,
                     std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : obj.items()) {
            if (value.is_object()) {
                auto next = parents;
                next.push_back(key);
                // Open the section so CLI11 knows the subcommand was configured.
                items.push_back(CLI::ConfigItem{next, "++", {}});
                walk(value, next, items);
                items.push_back(CLI::ConfigItem{next, "--", {}});
                continue;
            }
            CLI::ConfigItem item{parents, key, {}};
            if (value.is_array()) {
                for (const json& v : value) item.inputs.push_back(scalar(v));
            } else if (value.is_boolean()) {
                item.inputs.push_back(value.get<bool>() ? "true" : "false");
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
    }
};

json typed(const std::string& s) {
    if (s.empty()) return s;
    try {
        return json::parse(s);
    } catch (const json::exception&) {
        return s;
    }
}

/// Every long flag of `app` with its effective value (given or default).
json resolved_flags(const CLI::App& app) {
    json j = json::object();
    j["command"] = app.get_name();
    for (const CLI::Option* opt : app.get_options()) {
        std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config") continue;
        const auto& results = opt->results();
        if (opt->count() > 0) {
            if (opt->get_expected_max() > 1 || results.size() > 1) {
                json arr = json::array();
                for (const auto& r : results) arr.push_back(typed(r));
                j[name] = arr;
            } else {
                j[name] = typed(results.empty() ? std::string() : results.front());
            }
        } else {
            j[name] = typed(opt->get_default_str());
        }
    }
    return j;
}

std::string echo(const CLI::App& app) {
    const json cfg = resolved_flags(app);
    std::cerr << "config: " << cfg.dump() << '\n';
    return "# config: " + cfg.dump() + "\n";
}

struct PipelineFlags {
    double a = 1.4;
    double b = 0.3;
    double x0 = 0.1;
    double y0 = 0.1;
    std::size_t steps = 10'000;
    std::size_t samples = 0;  // overrides steps when > 0
    double keep = cb::kDefaultKeepFraction;
    std::size_t window = 0;  // 0 = model default
    std::size_t horizon = 1;
    std::size_t stride = 1;
    double train_fraction = cb::kDefaultTrainFraction;
    std::optional<double> theta;

    void add(CLI::App& app, bool with_window = true) {
        app.add_option("--a", a, "Map parameter a")->capture_default_str();
        app.add_option("--b", b, "Map parameter b")->capture_default_str();
        app.add_option("--x0", x0, "Initial x")->capture_default_str();
        app.add_option("--y0", y0, "Initial y")->capture_default_str();
        app.add_option("--steps", steps, "Map iterations")->capture_default_str()->check(CLI::PositiveNumber);
        app.add_option("--samples", samples, "Kept samples; sets steps = ceil(samples / keep) when > 0")
            ->capture_default_str();
        app.add_option("--keep", keep, "Fraction of the orbit kept after the transient")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
        if (with_window) {
            app.add_option("--window", window, "Past states per input (0 = model default)")->capture_default_str();
        }
        app.add_option("--horizon", horizon, "Prediction horizon h")->capture_default_str()->check(CLI::PositiveNumber);
        app.add_option("--stride", stride, "Window stride")->capture_default_str()->check(CLI::PositiveNumber);
        app.add_option("--train-fraction", train_fraction, "Chronological train share")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
        app.add_option("--theta", theta, "Extreme-event threshold; adds labels at T = horizon");
    }

    cb::PipelineConfig config(std::size_t model_window) const {
        cb::PipelineConfig p;
        p.map = {a, b};
        p.initial = {x0, y0};
        p.steps = samples > 0 ? cb::steps_for_samples(samples, keep) : steps;
        p.keep_fraction = keep;
        p.window = {model_window, horizon, stride};
        p.train_fraction = train_fraction;
        if (theta) p.criterion = cb::CriterionConfig{*theta, horizon};
        return p;
    }
};

cb::WindowedDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cb::IoError("cannot open dataset '" + path + "'");
    try {
        return cb::read_dataset_csv(in);
    } catch (const cb::FormatError& e) {
        throw cb::FormatError(path + ": " + e.what());
    }
}

std::uint64_t default_seed() { return 0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaosbench: Henon-map forecasting benchmark"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file whose keys mirror flag names (flags take precedence)");
    app.footer("Exit codes: 0 ok, 1 I/O or format error, 2 usage, 3 divergence, 4 shape, 5 numeric, 6 partial grid.\n"
               "Environment: CHAOSBENCH_SEED sets the default seed; --seed wins.");

    // simulate ---------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Iterate the map and write the orbit as CSV");
    double sim_a = 1.4, sim_b = 0.3, sim_x0 = 0.1, sim_y0 = 0.1, sim_keep = cb::kDefaultKeepFraction, sim_theta = 0.3;
    std::size_t sim_steps = 10'000;
    std::vector<std::size_t> sim_T;
    std::string sim_out = "trajectory.csv";
    sim->add_option("--a", sim_a, "Map parameter a")->capture_default_str();
    sim->add_option("--b", sim_b, "Map parameter b")->capture_default_str();
    sim->add_option("--x0", sim_x0, "Initial x")->capture_default_str();
    sim->add_option("--y0", sim_y0, "Initial y")->capture_default_str();
    sim->add_option("--steps", sim_steps, "Iterations")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--keep", sim_keep, "Fraction of the orbit kept (tail)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sim->add_option("--label-T", sim_T, "Add criterion label columns for these T values");
    sim->add_option("--theta", sim_theta, "Criterion threshold on y")->capture_default_str();
    sim->add_option("--out", sim_out, "Output CSV")->capture_default_str();

    // dataset ----------------------------------------------------------------
    auto* ds = app.add_subcommand("dataset", "Build windowed train/test CSVs");
    PipelineFlags ds_flags;
    ds_flags.window = 1;
    ds_flags.add(*ds);
    std::string ds_out = "dataset";
    ds->add_option("--out", ds_out, "Output directory (train.csv, test.csv)")->capture_default_str();

    // train ------------------------------------------------------------------
    auto* tr = app.add_subcommand("train", "Train one model and write a checkpoint");
    std::string tr_model, tr_profile = "A", tr_fnn_output = "linear", tr_train_csv, tr_test_csv;
    std::string tr_ckpt = "model.ckpt", tr_log = "train_log.csv";
    std::size_t tr_epochs = 50, tr_batch = 32, tr_trees = 100, tr_max_depth = 0;
    double tr_lr = 0.001;
    std::uint64_t tr_seed = default_seed();
    PipelineFlags tr_flags;
    tr->add_option("--model", tr_model, "fnn, rnn, lstm, rf or svr")
        ->required()
        ->check(CLI::IsMember({"fnn", "rnn", "lstm", "rf", "forest", "svr", "svm"}));
    tr->add_option("--profile", tr_profile, "Recurrent size profile (A or B)")
        ->capture_default_str()
        ->check(CLI::IsMember({"A", "B"}));
    tr->add_option("--fnn-output", tr_fnn_output, "FNN output activation (linear or softmax)")
        ->capture_default_str()
        ->check(CLI::IsMember({"linear", "softmax"}));
    tr->add_option("--train-csv", tr_train_csv, "Training set CSV (with --test-csv; replaces pipeline flags)");
    tr->add_option("--test-csv", tr_test_csv, "Test set CSV");
    tr_flags.add(*tr);
    tr->add_option("--epochs", tr_epochs, "Epochs (neural models)")->capture_default_str();
    tr->add_option("--batch", tr_batch, "Minibatch size")->capture_default_str();
    tr->add_option("--lr", tr_lr, "Adam learning rate")->capture_default_str();
    tr->add_option("--trees", tr_trees, "Random forest size")->capture_default_str();
    tr->add_option("--max-depth", tr_max_depth, "Tree depth limit (0 = none)")->capture_default_str();
    tr->add_option("--seed", tr_seed, "Seed")->envname("CHAOSBENCH_SEED")->capture_default_str();
    tr->add_option("--checkpoint", tr_ckpt, "Checkpoint output")->capture_default_str();
    tr->add_option("--log", tr_log, "Per-epoch training log CSV")->capture_default_str();

    // evaluate ---------------------------------------------------------------
    auto* ev = app.add_subcommand("evaluate", "Score a checkpoint on a test set");
    std::string ev_ckpt = "model.ckpt", ev_test_csv, ev_out = "report.csv";
    PipelineFlags ev_flags;
    ev->add_option("--checkpoint", ev_ckpt, "Checkpoint to load")->capture_default_str();
    ev->add_option("--test-csv", ev_test_csv, "Test set CSV (default: rebuild with pipeline flags)");
    ev_flags.add(*ev, false);
    ev->add_option("--out", ev_out, "Report CSV")->capture_default_str();

    // experiment -------------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "Run a named experiment grid");
    std::string ex_name, ex_out = "results";
    std::vector<std::string> ex_grid;
    std::uint64_t ex_seed = default_seed();
    std::optional<std::size_t> ex_cell;
    std::size_t ex_jobs = 1;
    ex->add_option("name", ex_name, "attractor_criterion, model_comparison, sample_size_sweep, horizon_accuracy or mse_heatmap")
        ->required()
        ->check(CLI::IsMember({"attractor_criterion", "model_comparison", "sample_size_sweep", "horizon_accuracy",
                               "mse_heatmap"}));
    ex->add_option("--grid", ex_grid, "Axis override axis=v1,v2 (repeatable)");
    ex->add_option("--seed", ex_seed, "Master seed")->envname("CHAOSBENCH_SEED")->capture_default_str();
    ex->add_option("--out", ex_out, "Output root directory")->capture_default_str();
    ex->add_option("--cell", ex_cell, "Run only this cell index");
    ex->add_option("--jobs", ex_jobs, "Cells run concurrently")->capture_default_str()->check(CLI::PositiveNumber);

    // report -----------------------------------------------------------------
    auto* rp = app.add_subcommand("report", "Re-render aggregate.csv and figure.svg from an experiment directory");
    std::string rp_dir;
    rp->add_option("dir", rp_dir, "Experiment directory (<out>/<experiment>)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << "usage: see `chaosbench --help`\n";
        return static_cast<int>(cb::ExitCode::usage);
    }

    try {
        if (*sim) {
            const std::string header = echo(*sim);
            const cb::Trajectory full = cb::iterate(cb::State{sim_x0, sim_y0}, sim_steps, cb::MapParams{sim_a, sim_b});
            const cb::Trajectory kept = cb::trim_transient(full, sim_keep);
            std::ostringstream out;
            out << header;
            cb::write_trajectory_csv(out, kept, sim_T, sim_theta);
            cb::io::write_text_atomic(sim_out, out.str());
            std::cerr << "wrote " << sim_out << '\n';
        } else if (*ds) {
            const std::string header = echo(*ds);
            if (ds_flags.window == 0) throw cb::ConfigError("--window must be >= 1");
            const cb::SplitDataset split = cb::run_pipeline(ds_flags.config(ds_flags.window));
            for (const auto& [name, part] : {std::pair{"train.csv", &split.train}, std::pair{"test.csv", &split.test}}) {
                std::ostringstream out;
                out << header;
                cb::write_dataset_csv(out, *part);
                cb::io::write_text_atomic(std::filesystem::path(ds_out) / name, out.str());
            }
            std::cerr << "wrote " << ds_out << "/train.csv (" << split.train.size() << " rows), test.csv ("
                      << split.test.size() << " rows)\n";
        } else if (*tr) {
            echo(*tr);
            cb::ModelSpec spec = cb::ModelSpec::defaults(cb::model_kind_from_string(tr_model));
            spec.profile = cb::profile_from_string(tr_profile);
            spec.fnn_output = cb::activation_from_string(tr_fnn_output);
            spec.forest.n_trees = tr_trees;
            spec.forest.max_depth = tr_max_depth;
            cb::SplitDataset split;
            if (!tr_train_csv.empty() || !tr_test_csv.empty()) {
                if (tr_train_csv.empty() || tr_test_csv.empty()) {
                    throw cb::ConfigError("--train-csv and --test-csv must be given together");
                }
                split.train = load_dataset(tr_train_csv);
                split.test = load_dataset(tr_test_csv);
                const std::size_t n = split.train.config.window_len_N;
                if (split.test.config.window_len_N != n) {
                    throw cb::ShapeError("train and test CSVs use different window lengths");
                }
                if (tr_flags.window != 0 && tr_flags.window != n) {
                    throw cb::ShapeError("--window " + std::to_string(tr_flags.window) + " does not match dataset window " +
                                         std::to_string(n));
                }
                spec.window = n;
            } else {
                if (tr_flags.window != 0) spec.window = tr_flags.window;
                split = cb::run_pipeline(tr_flags.config(spec.window));
            }
            cb::TrainConfig tc;
            tc.epochs = tr_epochs;
            tc.batch_size = tr_batch;
            tc.learning_rate = tr_lr;
            tc.seed = tr_seed;
            tc.validate();
            auto model = cb::make_model(spec, tr_seed);
            const cb::TrainLog log = cb::fit(*model, split, tc);
            std::ostringstream ck;
            cb::write_checkpoint(ck, *model, tc);
            cb::io::write_text_atomic(tr_ckpt, ck.str());
            std::ostringstream lg;
            cb::write_train_log_csv(lg, log);
            cb::io::write_text_atomic(tr_log, lg.str());
            std::cerr << "wrote " << tr_ckpt << " and " << tr_log << '\n';
            std::cout << "mse=" << cb::io::format_double(log.final_test_mse) << std::endl;
        } else if (*ev) {
            const std::string header = echo(*ev);
            std::ifstream in(ev_ckpt);
            if (!in) throw cb::IoError("cannot open checkpoint '" + ev_ckpt + "'");
            cb::Checkpoint ck = cb::read_checkpoint(in);
            cb::WindowedDataset test;
            std::size_t samples = 0;
            if (!ev_test_csv.empty()) {
                test = load_dataset(ev_test_csv);
                samples = test.size();
            } else {
                const cb::PipelineConfig pc = ev_flags.config(ck.model->spec().window);
                test = cb::run_pipeline(pc).test;
                samples = cb::fraction_count(pc.keep_fraction, pc.steps);
            }
            const cb::RegressionMetrics m = cb::evaluate_regression(*ck.model, test);
            cb::EvalReport r;
            r.model = std::string(cb::to_string(ck.model->kind()));
            r.profile = ck.model->spec().profile_label();
            r.samples = samples;
            r.horizon = test.config.horizon_h;
            r.seed = ck.train.seed;
            r.mse_both = m.mse_both;
            r.mse_x = m.mse_x;
            if (test.event_labels && test.theta) {
                const cb::EventMetrics e =
                    cb::evaluate_event_accuracy(*ck.model, test, cb::CriterionConfig{*test.theta, test.config.horizon_h});
                r.event_accuracy = e.accuracy;
                r.event_base_rate = e.base_rate;
            }
            std::ostringstream out;
            out << header;
            cb::write_reports_csv(out, std::vector<cb::EvalReport>{r});
            cb::io::write_text_atomic(ev_out, out.str());
            std::cerr << "wrote " << ev_out << '\n';
            std::cout << "mse=" << cb::io::format_double(r.mse_both) << std::endl;
        } else if (*ex) {
            echo(*ex);
            cb::ExperimentSpec spec = cb::ExperimentSpec::defaults(cb::experiment_kind_from_string(ex_name));
            for (const std::string& g : ex_grid) {
                const auto eq = g.find('=');
                if (eq == std::string::npos || eq == 0) {
                    throw cb::ConfigError("--grid expects axis=v1,v2, got '" + g + "'");
                }
                spec.set_axis(g.substr(0, eq), g.substr(eq + 1));
            }
            spec.master_seed = ex_seed;
            spec.output_dir = ex_out;
            cb::RunOptions opt;
            opt.jobs = ex_jobs;
            opt.cell = ex_cell;
            const cb::GridResult res = cb::run_experiment(spec, opt);
            std::cerr << "wrote " << (spec.output_dir / std::string(cb::to_string(spec.kind))).string() << '\n';
            if (!res.ok()) {
                std::cerr << "failed cells:\n";
                for (const auto& f : res.failed) std::cerr << "  " << f.index << ' ' << f.id << ": " << f.message << '\n';
                return static_cast<int>(cb::ExitCode::partial_grid);
            }
        } else if (*rp) {
            echo(*rp);
            cb::render_report(rp_dir);
            std::cerr << "rendered " << rp_dir << '\n';
        }
    } catch (const cb::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::cerr << "usage: see `chaosbench --help`\n";
        return static_cast<int>(e.exit_code());
    } catch (const cb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << '\n';
        return static_cast<int>(cb::ExitCode::failure);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(cb::ExitCode::failure);
    }
    return 0;
}
