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

#include "chaosbench/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "chaosbench/config_json.hpp"
#include "chaosbench/errors.hpp"
#include "chaosbench/io.hpp"
#include "chaosbench/svg.hpp"
#include "chaosbench/training.hpp"

namespace chaosbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr ExperimentKind kAllKinds[] = {ExperimentKind::attractor_criterion, ExperimentKind::model_comparison,
                                        ExperimentKind::sample_size_sweep, ExperimentKind::horizon_accuracy,
                                        ExperimentKind::mse_heatmap};

const std::set<std::string>& allowed_axes(ExperimentKind k) {
    static const std::set<std::string> attractor{"T", "theta", "steps"};
    static const std::set<std::string> trained{"model", "profile", "samples", "horizon", "replicate",
                                               "epochs", "batch",   "lr",      "fnn_output", "theta"};
    return k == ExperimentKind::attractor_criterion ? attractor : trained;
}

std::vector<json> ints(std::initializer_list<long long> v) { return {v.begin(), v.end()}; }
std::vector<json> strs(std::initializer_list<const char*> v) {
    std::vector<json> out;
    for (const char* s : v) out.emplace_back(s);
    return out;
}

std::size_t as_size(const json& v, const std::string& axis) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("axis '" + axis + "': expected a non-negative integer, got " + v.dump());
    }
    return v.get<std::size_t>();
}

double as_double(const json& v, const std::string& axis) {
    if (!v.is_number()) throw ConfigError("axis '" + axis + "': expected a number, got " + v.dump());
    return v.get<double>();
}

std::string as_string(const json& v, const std::string& axis) {
    if (!v.is_string()) throw ConfigError("axis '" + axis + "': expected a string, got " + v.dump());
    return v.get<std::string>();
}

const std::vector<json>& axis(const ExperimentSpec& s, const std::string& name) {
    const auto it = s.grid.find(name);
    if (it == s.grid.end()) throw ConfigError("missing grid axis '" + name + "'");
    return it->second;
}

const json& single(const ExperimentSpec& s, const std::string& name) {
    const auto& v = axis(s, name);
    if (v.size() != 1) throw ConfigError("setting '" + name + "' takes exactly one value");
    return v.front();
}

std::vector<std::size_t> size_axis(const ExperimentSpec& s, const std::string& name) {
    std::vector<std::size_t> out;
    for (const json& v : axis(s, name)) out.push_back(as_size(v, name));
    return out;
}

json parse_scalar(const std::string& text) {
    // Integers and floats become numbers; everything else stays a string.
    try {
        std::size_t used = 0;
        const long long i = std::stoll(text, &used);
        if (used == text.size()) return i;
    } catch (const std::exception&) {
    }
    try {
        std::size_t used = 0;
        const double d = std::stod(text, &used);
        if (used == text.size()) return d;
    } catch (const std::exception&) {
    }
    return text;
}

TrainConfig train_config(const ExperimentSpec& s, std::uint64_t seed) {
    TrainConfig c;
    c.epochs = as_size(single(s, "epochs"), "epochs");
    c.batch_size = as_size(single(s, "batch"), "batch");
    c.learning_rate = as_double(single(s, "lr"), "lr");
    c.seed = seed;
    return c;
}

std::string config_comment(const json& provenance) { return "# config: " + provenance.dump() + "\n"; }

std::string reports_csv(const json& provenance, std::span<const EvalReport> rows, bool with_reference) {
    std::ostringstream out;
    out << config_comment(provenance);
    if (!with_reference) {
        write_reports_csv(out, rows);
        return out.str();
    }
    out << report_csv_header() << ",reference_mse\n";
    for (const EvalReport& r : rows) {
        const auto ref = reference_mse(r.model);
        out << report_csv_row(r) << ',' << (ref ? io::format_double(*ref) : std::string()) << '\n';
    }
    return out.str();
}

std::string points_csv(const json& provenance, const std::vector<std::size_t>& Ts,
                       std::span<const PointRecord> points) {
    std::ostringstream out;
    out << config_comment(provenance) << "x,y";
    for (std::size_t T : Ts) out << ",sat_T" << T;
    out << '\n';
    for (const PointRecord& p : points) {
        out << io::format_double(p.x) << ',' << io::format_double(p.y);
        for (std::uint8_t s : p.satisfied) out << ',' << static_cast<int>(s);
        out << '\n';
    }
    return out.str();
}

std::vector<PointRecord> read_points_csv(const std::string& text, std::vector<std::size_t>& Ts) {
    std::istringstream in(text);
    std::string line;
    std::vector<PointRecord> out;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::string where = "points line " + std::to_string(line_no);
        const auto f = io::split_csv_line(line);
        if (!header) {
            if (f.size() < 2 || f[0] != "x" || f[1] != "y") throw FormatError(where + ": expected x,y header");
            Ts.clear();
            for (std::size_t i = 2; i < f.size(); ++i) {
                if (f[i].substr(0, 5) != "sat_T") throw FormatError(where + ": bad column " + std::string(f[i]));
                Ts.push_back(static_cast<std::size_t>(io::parse_int(f[i].substr(5), where)));
            }
            header = true;
            continue;
        }
        if (f.size() != 2 + Ts.size()) throw FormatError(where + ": wrong field count");
        PointRecord p;
        p.x = io::parse_double(f[0], where);
        p.y = io::parse_double(f[1], where);
        for (std::size_t i = 2; i < f.size(); ++i) {
            p.satisfied.push_back(static_cast<std::uint8_t>(io::parse_int(f[i], where)));
        }
        out.push_back(std::move(p));
    }
    if (!header) throw FormatError("points: missing header");
    return out;
}

std::string aggregate_csv(const json& provenance, std::span<const EvalReport> rows) {
    std::ostringstream out;
    out << config_comment(provenance);
    const auto agg = aggregate_seeds(rows);
    write_aggregate_csv(out, agg);
    return out.str();
}

/// Mean and population std of one metric per group, in first-appearance order.
struct GroupStat {
    std::string model;
    std::string profile;
    std::size_t samples = 0;
    std::size_t horizon = 0;
    double mean = 0.0;
    double std = 0.0;
};

std::optional<GroupStat> lookup(const std::vector<AggregateRow>& agg, const std::string& model,
                                std::size_t samples, std::size_t horizon, const std::string& metric) {
    for (const AggregateRow& a : agg) {
        if (a.model == model && a.samples == samples && a.horizon == horizon && a.metric == metric) {
            return GroupStat{a.model, a.profile, a.samples, a.horizon, a.mean, a.std};
        }
    }
    return std::nullopt;
}

template <class T, class F>
std::vector<T> unique_in_order(std::span<const EvalReport> rows, F key) {
    std::vector<T> out;
    for (const EvalReport& r : rows) {
        T k = key(r);
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
    return out;
}

std::string figure_svg(ExperimentKind kind, const json& provenance, std::span<const EvalReport> rows,
                       const std::vector<std::size_t>& Ts, std::span<const PointRecord> points) {
    svg::Chart chart;
    chart.metadata = provenance.dump();
    if (kind == ExperimentKind::attractor_criterion) {
        chart.title = "Henon attractor and extreme-event criterion";
        chart.x_label = "x";
        chart.y_label = "y";
        std::vector<svg::PointGroup> groups;
        svg::PointGroup none{"no criterion met", "#333333", {}, {}};
        for (const PointRecord& p : points) {
            if (std::none_of(p.satisfied.begin(), p.satisfied.end(), [](std::uint8_t s) { return s != 0; })) {
                none.x.push_back(p.x);
                none.y.push_back(p.y);
            }
        }
        groups.push_back(std::move(none));
        for (std::size_t t = 0; t < Ts.size(); ++t) {
            svg::PointGroup g{"T = " + std::to_string(Ts[t]), svg::palette(t + 1), {}, {}};
            for (const PointRecord& p : points) {
                if (p.satisfied[t]) {
                    g.x.push_back(p.x);
                    g.y.push_back(p.y);
                }
            }
            groups.push_back(std::move(g));
        }
        return svg::scatter(chart, groups);
    }

    const auto agg = aggregate_seeds(rows);
    const auto models = unique_in_order<std::string>(rows, [](const EvalReport& r) { return r.model; });
    const auto samples = unique_in_order<std::size_t>(rows, [](const EvalReport& r) { return r.samples; });
    const auto horizons = unique_in_order<std::size_t>(rows, [](const EvalReport& r) { return r.horizon; });

    switch (kind) {
        case ExperimentKind::model_comparison: {
            chart.title = "Test MSE by model";
            chart.x_label = "model";
            chart.y_label = "MSE (log scale)";
            chart.log_y = true;
            svg::Series both{"mse_both", svg::palette(0), {}, {}};
            svg::Series xonly{"mse_x", svg::palette(1), {}, {}};
            svg::Series ref{"reference_mse", svg::palette(3), {}, {}};
            std::vector<std::string> cats;
            for (const std::string& m : models) {
                const EvalReport* first = nullptr;
                for (const EvalReport& r : rows) {
                    if (r.model == m) {
                        first = &r;
                        break;
                    }
                }
                cats.push_back(m);
                const auto b = lookup(agg, m, first->samples, first->horizon, "mse_both");
                const auto x = lookup(agg, m, first->samples, first->horizon, "mse_x");
                both.values.push_back(b ? b->mean : NAN);
                xonly.values.push_back(x ? x->mean : NAN);
                const auto r = reference_mse(m);
                ref.values.push_back(r ? *r : NAN);
            }
            return svg::category_points(chart, cats, {both, xonly, ref});
        }
        case ExperimentKind::sample_size_sweep: {
            chart.title = "Test MSE by sample size";
            chart.x_label = "samples";
            chart.y_label = "MSE (log scale)";
            chart.log_y = true;
            std::vector<std::string> cats;
            for (std::size_t s : samples) cats.push_back(std::to_string(s));
            std::vector<svg::Series> series;
            for (std::size_t m = 0; m < models.size(); ++m) {
                svg::Series s{models[m], svg::palette(m), {}, {}};
                for (std::size_t n : samples) {
                    const auto st = lookup(agg, models[m], n, horizons.front(), "mse_both");
                    s.values.push_back(st ? st->mean : NAN);
                }
                series.push_back(std::move(s));
            }
            return svg::grouped_bars(chart, cats, series);
        }
        case ExperimentKind::horizon_accuracy: {
            chart.title = "Extreme-event accuracy by horizon";
            chart.x_label = "prediction horizon";
            chart.y_label = "accuracy (mean +/- std over seeds)";
            std::vector<double> x(horizons.begin(), horizons.end());
            std::vector<svg::Series> series;
            std::size_t colour = 0;
            for (const std::string& m : models) {
                for (std::size_t n : samples) {
                    svg::Series s{m + " n=" + std::to_string(n), svg::palette(colour++), {}, {}};
                    for (std::size_t h : horizons) {
                        const auto st = lookup(agg, m, n, h, "event_acc");
                        s.values.push_back(st ? st->mean : NAN);
                        s.errors.push_back(st ? st->std : 0.0);
                    }
                    series.push_back(std::move(s));
                }
            }
            return svg::lines(chart, x, series);
        }
        case ExperimentKind::mse_heatmap: {
            chart.title = "Mean test MSE by sample size and horizon";
            chart.x_label = "prediction horizon";
            chart.y_label = "samples";
            std::vector<std::string> rl, cl;
            for (std::size_t s : samples) rl.push_back(std::to_string(s));
            for (std::size_t h : horizons) cl.push_back(std::to_string(h));
            return svg::heatmap(chart, rl, cl, heatmap_matrix(rows, samples, horizons));
        }
        case ExperimentKind::attractor_criterion:
            break;
    }
    return {};
}

std::string heatmap_csv(const json& provenance, std::span<const EvalReport> rows) {
    const auto samples = unique_in_order<std::size_t>(rows, [](const EvalReport& r) { return r.samples; });
    const auto horizons = unique_in_order<std::size_t>(rows, [](const EvalReport& r) { return r.horizon; });
    const auto m = heatmap_matrix(rows, samples, horizons);
    std::ostringstream out;
    out << config_comment(provenance) << "samples";
    for (std::size_t h : horizons) out << ",h" << h;
    out << '\n';
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out << samples[i];
        for (double v : m[i]) out << ',' << io::format_double(v);
        out << '\n';
    }
    return out.str();
}

void write_derived_outputs(const fs::path& dir, ExperimentKind kind, const json& provenance,
                           std::span<const EvalReport> rows, const std::vector<std::size_t>& Ts,
                           std::span<const PointRecord> points) {
    if (kind != ExperimentKind::attractor_criterion) {
        io::write_text_atomic(dir / "aggregate.csv", aggregate_csv(provenance, rows));
    }
    if (kind == ExperimentKind::mse_heatmap) {
        io::write_text_atomic(dir / "heatmap.csv", heatmap_csv(provenance, rows));
    }
    io::write_text_atomic(dir / "figure.svg", figure_svg(kind, provenance, rows, Ts, points));
}

}  // namespace

std::string_view to_string(ExperimentKind k) noexcept {
    switch (k) {
        case ExperimentKind::attractor_criterion: return "attractor_criterion";
        case ExperimentKind::model_comparison: return "model_comparison";
        case ExperimentKind::sample_size_sweep: return "sample_size_sweep";
        case ExperimentKind::horizon_accuracy: return "horizon_accuracy";
        case ExperimentKind::mse_heatmap: return "mse_heatmap";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (ExperimentKind k : kAllKinds) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown experiment '" + std::string(name) +
                      "' (expected attractor_criterion, model_comparison, sample_size_sweep, "
                      "horizon_accuracy or mse_heatmap)");
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
    ExperimentSpec s;
    s.kind = kind;
    if (kind == ExperimentKind::attractor_criterion) {
        s.grid["T"] = ints({4, 6, 8});
        s.grid["theta"] = {json(0.3)};
        s.grid["steps"] = ints({10000});
        return s;
    }
    s.grid["profile"] = strs({"A"});
    s.grid["epochs"] = ints({50});
    s.grid["batch"] = ints({32});
    s.grid["lr"] = {json(0.001)};
    s.grid["fnn_output"] = strs({"linear"});
    s.grid["theta"] = {json(0.3)};
    switch (kind) {
        case ExperimentKind::model_comparison:
            s.grid["model"] = strs({"rf", "rnn", "lstm", "svr", "fnn"});
            s.grid["samples"] = ints({2000});
            s.grid["horizon"] = ints({1});
            s.grid["replicate"] = ints({0});
            break;
        case ExperimentKind::sample_size_sweep:
            s.grid["model"] = strs({"fnn", "lstm"});
            s.grid["samples"] = ints({10000, 20000, 30000, 40000, 50000});
            s.grid["horizon"] = ints({1});
            s.grid["replicate"] = ints({0});
            break;
        case ExperimentKind::horizon_accuracy:
            s.grid["model"] = strs({"fnn", "lstm"});
            s.grid["samples"] = ints({1000, 300000});
            s.grid["horizon"] = ints({1, 2, 3, 4, 5, 6, 7, 8});
            s.grid["replicate"] = ints({0, 1, 2});
            break;
        case ExperimentKind::mse_heatmap:
            s.grid["model"] = strs({"lstm"});
            s.grid["samples"] = ints({10000, 20000, 30000, 40000, 50000});
            s.grid["horizon"] = ints({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
            s.grid["replicate"] = ints({0, 1, 2});
            break;
        case ExperimentKind::attractor_criterion:
            break;
    }
    return s;
}

void ExperimentSpec::validate() const {
    const auto& allowed = allowed_axes(kind);
    for (const auto& [name, values] : grid) {
        if (!allowed.count(name)) {
            throw ConfigError("experiment " + std::string(to_string(kind)) + ": unknown axis '" + name + "'");
        }
        if (values.empty()) throw ConfigError("axis '" + name + "' is empty");
    }
    for (const std::string& name : allowed) {
        if (!grid.count(name)) throw ConfigError("missing grid axis '" + name + "'");
    }
    if (kind == ExperimentKind::attractor_criterion) {
        for (std::size_t T : size_axis(*this, "T")) {
            if (T == 0) throw ConfigError("axis 'T': horizons must be >= 1");
        }
        as_double(single(*this, "theta"), "theta");
        if (as_size(single(*this, "steps"), "steps") == 0) throw ConfigError("setting 'steps' must be >= 1");
        return;
    }
    for (const json& m : axis(*this, "model")) model_kind_from_string(as_string(m, "model"));
    for (const json& p : axis(*this, "profile")) profile_from_string(as_string(p, "profile"));
    for (std::size_t n : size_axis(*this, "samples")) {
        if (n < 10) throw ConfigError("axis 'samples': need at least 10 samples");
    }
    for (std::size_t h : size_axis(*this, "horizon")) {
        if (h == 0) throw ConfigError("axis 'horizon': horizons must be >= 1");
    }
    size_axis(*this, "replicate");
    activation_from_string(as_string(single(*this, "fnn_output"), "fnn_output"));
    as_double(single(*this, "theta"), "theta");
    train_config(*this, 0).validate();
}

void ExperimentSpec::set_axis(const std::string& name, const std::string& values) {
    std::vector<json> parsed;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = values.find(',', start);
        const std::string item = values.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw ConfigError("axis '" + name + "': empty value in '" + values + "'");
        parsed.push_back(parse_scalar(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    const auto previous = grid;
    grid[name] = std::move(parsed);
    try {
        validate();
    } catch (...) {
        grid = previous;
        throw;
    }
}

json ExperimentSpec::resolved() const {
    json j;
    j["experiment"] = std::string(to_string(kind));
    j["master_seed"] = master_seed;
    json g = json::object();
    for (const auto& [name, values] : grid) g[name] = values;
    j["grid"] = g;
    return j;
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    ExperimentSpec s = defaults(experiment_kind_from_string(j.at("experiment").get<std::string>()));
    if (j.contains("master_seed")) s.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("output_dir")) s.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("grid")) {
        for (const auto& [name, values] : j.at("grid").items()) {
            if (values.is_array()) {
                s.grid[name] = values.get<std::vector<json>>();
            } else {
                s.grid[name] = {values};
            }
        }
    }
    return s;
}

std::vector<GridCell> enumerate_cells(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<GridCell> cells;
    if (spec.kind == ExperimentKind::attractor_criterion) {
        GridCell c;
        c.id = "cell-000";
        c.samples = fraction_count(kDefaultKeepFraction, as_size(single(spec, "steps"), "steps"));
        cells.push_back(std::move(c));
        return cells;
    }
    const auto replicates = size_axis(spec, "replicate");
    const Activation fnn_out = activation_from_string(as_string(single(spec, "fnn_output"), "fnn_output"));
    for (const json& m : axis(spec, "model")) {
        const ModelKind kind = model_kind_from_string(as_string(m, "model"));
        // Non-recurrent models ignore the profile axis, so they get one cell per (samples, horizon).
        const bool recurrent = kind == ModelKind::rnn || kind == ModelKind::lstm;
        const auto& profiles = axis(spec, "profile");
        const std::size_t n_prof = recurrent ? profiles.size() : 1;
        for (std::size_t p = 0; p < n_prof; ++p) {
            for (std::size_t n : size_axis(spec, "samples")) {
                for (std::size_t h : size_axis(spec, "horizon")) {
                    GridCell c;
                    c.index = cells.size();
                    char id[32];
                    std::snprintf(id, sizeof(id), "cell-%03zu", c.index);
                    c.id = id;
                    c.model = ModelSpec::defaults(kind);
                    c.model.profile = profile_from_string(as_string(profiles[p], "profile"));
                    c.model.fnn_output = fnn_out;
                    c.samples = n;
                    c.horizon = h;
                    c.replicates = replicates;
                    cells.push_back(std::move(c));
                }
            }
        }
    }
    return cells;
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t cell_index, std::size_t replicate) {
    return derive_seed(master, {static_cast<std::uint64_t>(cell_index), static_cast<std::uint64_t>(replicate)});
}

std::vector<EvalReport> run_cell(const ExperimentSpec& spec, const GridCell& cell) {
    PipelineConfig pc;
    pc.steps = steps_for_samples(cell.samples);
    pc.window = WindowConfig{cell.model.window, cell.horizon, 1};
    const bool events = spec.kind == ExperimentKind::horizon_accuracy;
    CriterionConfig crit{as_double(single(spec, "theta"), "theta"), cell.horizon};
    if (events) pc.criterion = crit;
    const SplitDataset split = run_pipeline(pc);

    std::vector<EvalReport> out;
    for (std::size_t r : cell.replicates) {
        const std::uint64_t seed = cell_seed(spec.master_seed, cell.index, r);
        auto model = make_model(cell.model, seed);
        fit(*model, split, train_config(spec, seed));
        const RegressionMetrics m = evaluate_regression(*model, split.test);
        EvalReport rep;
        rep.model = std::string(to_string(cell.model.kind));
        rep.profile = cell.model.profile_label();
        rep.samples = cell.samples;
        rep.horizon = cell.horizon;
        rep.seed = seed;
        rep.mse_both = m.mse_both;
        rep.mse_x = m.mse_x;
        if (!std::isfinite(m.mse_both) || !std::isfinite(m.mse_x)) {
            throw NumericError("cell " + cell.id + ": non-finite test MSE");
        }
        if (events) {
            const EventMetrics e = evaluate_event_accuracy(*model, split.test, crit);
            rep.event_accuracy = e.accuracy;
            rep.event_base_rate = e.base_rate;
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<PointRecord> attractor_points(const ExperimentSpec& spec, std::vector<std::size_t>* T_out) {
    spec.validate();
    if (spec.kind != ExperimentKind::attractor_criterion) throw ConfigError("not an attractor_criterion spec");
    const auto Ts = size_axis(spec, "T");
    const double theta = as_double(single(spec, "theta"), "theta");
    const std::size_t steps = as_size(single(spec, "steps"), "steps");
    const std::size_t max_T = *std::max_element(Ts.begin(), Ts.end());
    // Run max_T extra steps so every kept point has a label at every T.
    const Trajectory full = iterate(State{0.1, 0.1}, steps + max_T);
    const std::size_t kept = fraction_count(kDefaultKeepFraction, steps);
    Trajectory tail;
    tail.params = full.params;
    tail.initial = full.initial;
    tail.first_step = steps - kept + 1;
    tail.states.assign(full.states.begin() + static_cast<std::ptrdiff_t>(steps - kept), full.states.end());

    std::vector<PointRecord> points(kept);
    for (std::size_t i = 0; i < kept; ++i) {
        points[i].x = tail.states[i].x;
        points[i].y = tail.states[i].y;
    }
    for (std::size_t T : Ts) {
        const auto labels = label_extreme_events(tail, CriterionConfig{theta, T});
        for (std::size_t i = 0; i < kept; ++i) points[i].satisfied.push_back(labels[i]);
    }
    if (T_out) *T_out = Ts;
    return points;
}

std::optional<double> reference_mse(std::string_view model) {
    if (model == "rf") return 0.5590726121211392;
    if (model == "rnn") return 0.5651870153693168;
    if (model == "lstm") return 2.0027390680736243e-06;
    if (model == "svr") return 0.4274929286882515;
    if (model == "fnn") return 0.6486854565019292;
    return std::nullopt;
}

std::vector<std::vector<double>> heatmap_matrix(std::span<const EvalReport> rows,
                                                const std::vector<std::size_t>& samples,
                                                const std::vector<std::size_t>& horizons) {
    const auto agg = aggregate_seeds(rows);
    std::vector<std::vector<double>> m(samples.size(), std::vector<double>(horizons.size(), NAN));
    for (const AggregateRow& a : agg) {
        if (a.metric != "mse_both") continue;
        const auto si = std::find(samples.begin(), samples.end(), a.samples);
        const auto hi = std::find(horizons.begin(), horizons.end(), a.horizon);
        if (si == samples.end() || hi == horizons.end()) continue;
        m[static_cast<std::size_t>(si - samples.begin())][static_cast<std::size_t>(hi - horizons.begin())] = a.mean;
    }
    return m;
}

GridResult run_experiment(const ExperimentSpec& spec, const RunOptions& opt) {
    spec.validate();
    GridResult result;
    result.kind = spec.kind;
    result.provenance = spec.resolved();
    const fs::path dir = spec.output_dir / std::string(to_string(spec.kind));

    if (spec.kind == ExperimentKind::attractor_criterion) {
        if (opt.cell && *opt.cell != 0) {
            throw ConfigError("cell index " + std::to_string(*opt.cell) + " out of range (1 cell)");
        }
        result.points = attractor_points(spec, &result.T_values);
        if (opt.write_outputs) {
            const std::string csv = points_csv(result.provenance, result.T_values, result.points);
            io::write_text_atomic(dir / "cell-000" / "report.csv", csv);
            io::write_text_atomic(dir / "summary.csv", csv);
            io::write_text_atomic(dir / "config.json", result.provenance.dump(2) + "\n");
            write_derived_outputs(dir, spec.kind, result.provenance, {}, result.T_values, result.points);
        }
        return result;
    }

    const auto cells = enumerate_cells(spec);
    std::vector<std::size_t> todo;
    if (opt.cell) {
        if (*opt.cell >= cells.size()) {
            throw ConfigError("cell index " + std::to_string(*opt.cell) + " out of range (" +
                              std::to_string(cells.size()) + " cells)");
        }
        todo.push_back(*opt.cell);
    } else {
        for (std::size_t i = 0; i < cells.size(); ++i) todo.push_back(i);
    }

    std::vector<std::vector<EvalReport>> per_cell(cells.size());
    std::vector<std::optional<std::string>> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= todo.size()) return;
            const GridCell& cell = cells[todo[k]];
            try {
                per_cell[cell.index] = run_cell(spec, cell);
                if (opt.write_outputs) {
                    io::write_text_atomic(dir / cell.id / "report.csv",
                                          reports_csv(result.provenance, per_cell[cell.index], false));
                }
            } catch (const std::exception& e) {
                errors[cell.index] = e.what();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, todo.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i : todo) {
        if (errors[i]) {
            result.failed.push_back(CellFailure{i, cells[i].id, *errors[i]});
            continue;
        }
        result.rows.insert(result.rows.end(), per_cell[i].begin(), per_cell[i].end());
    }

    if (opt.write_outputs) {
        std::vector<EvalReport> summary_rows = result.rows;
        if (opt.cell) {
            // A single-cell run folds in reports that earlier runs of the same grid
            // left on disk; a directory holding another grid keeps its shared files.
            const fs::path config_path = dir / "config.json";
            if (fs::exists(config_path) && json::parse(io::read_text(config_path)) != result.provenance) {
                return result;
            }
            summary_rows.clear();
            for (const GridCell& cell : cells) {
                const fs::path report = dir / cell.id / "report.csv";
                if (cell.index == *opt.cell) {
                    summary_rows.insert(summary_rows.end(), result.rows.begin(), result.rows.end());
                } else if (fs::exists(report)) {
                    std::istringstream in(io::read_text(report));
                    const auto rows = read_reports_csv(in);
                    summary_rows.insert(summary_rows.end(), rows.begin(), rows.end());
                }
            }
        }
        io::write_text_atomic(dir / "summary.csv",
                              reports_csv(result.provenance, summary_rows,
                                          spec.kind == ExperimentKind::model_comparison));
        io::write_text_atomic(dir / "config.json", result.provenance.dump(2) + "\n");
        if (!summary_rows.empty()) {
            write_derived_outputs(dir, spec.kind, result.provenance, summary_rows, {}, {});
        }
    }
    return result;
}

namespace {
GridResult run_checked(ExperimentKind expected, const ExperimentSpec& spec, const RunOptions& opt) {
    if (spec.kind != expected) {
        throw ConfigError("spec is for " + std::string(to_string(spec.kind)) + ", not " +
                          std::string(to_string(expected)));
    }
    return run_experiment(spec, opt);
}
}  // namespace

GridResult run_attractor_criterion(const ExperimentSpec& spec, const RunOptions& opt) {
    return run_checked(ExperimentKind::attractor_criterion, spec, opt);
}
GridResult run_model_comparison(const ExperimentSpec& spec, const RunOptions& opt) {
    return run_checked(ExperimentKind::model_comparison, spec, opt);
}
GridResult run_sample_size_sweep(const ExperimentSpec& spec, const RunOptions& opt) {
    return run_checked(ExperimentKind::sample_size_sweep, spec, opt);
}
GridResult run_horizon_accuracy(const ExperimentSpec& spec, const RunOptions& opt) {
    return run_checked(ExperimentKind::horizon_accuracy, spec, opt);
}
GridResult run_mse_heatmap(const ExperimentSpec& spec, const RunOptions& opt) {
    return run_checked(ExperimentKind::mse_heatmap, spec, opt);
}

void render_report(const fs::path& experiment_dir) {
    const json provenance = json::parse(io::read_text(experiment_dir / "config.json"));
    const ExperimentSpec spec = ExperimentSpec::from_json(provenance);
    const std::string summary = io::read_text(experiment_dir / "summary.csv");
    if (spec.kind == ExperimentKind::attractor_criterion) {
        std::vector<std::size_t> Ts;
        const auto points = read_points_csv(summary, Ts);
        write_derived_outputs(experiment_dir, spec.kind, provenance, {}, Ts, points);
        return;
    }
    std::istringstream in(summary);
    const auto rows = read_reports_csv(in);
    if (rows.empty()) throw FormatError(experiment_dir.string() + "/summary.csv: no rows");
    write_derived_outputs(experiment_dir, spec.kind, provenance, rows, {}, {});
}

}  // namespace chaosbench
