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

#include "chaosbench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "chaosbench/errors.hpp"
#include "chaosbench/io.hpp"

namespace chaosbench {

namespace {

constexpr double kCountSlack = 1e-9;

void validate(const WindowConfig& w) {
    if (w.window_len_N < 1 || w.horizon_h < 1 || w.stride < 1) {
        throw ConfigError("window length, horizon and stride must all be >= 1");
    }
}

}  // namespace

std::size_t fraction_count(double fraction, std::size_t n) {
    const double exact = fraction * static_cast<double>(n);
    const double nearest = std::round(exact);
    if (std::abs(exact - nearest) <= kCountSlack * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::floor(exact));
}

Matrix WindowedDataset::target_matrix() const {
    Matrix m(targets.size(), 2);
    for (std::size_t k = 0; k < targets.size(); ++k) {
        m(k, 0) = targets[k].x;
        m(k, 1) = targets[k].y;
    }
    return m;
}

WindowedDataset WindowedDataset::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > size()) {
        throw ShapeError("dataset slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") out of range for " + std::to_string(size()) + " samples");
    }
    WindowedDataset out;
    out.config = config;
    out.theta = theta;
    const std::size_t width = inputs.cols();
    std::vector<double> data(inputs.data() + begin * width, inputs.data() + end * width);
    out.inputs = Matrix::from_rows(end - begin, width, std::move(data));
    out.targets.assign(targets.begin() + begin, targets.begin() + end);
    out.window_start.assign(window_start.begin() + begin, window_start.begin() + end);
    if (event_labels) {
        out.event_labels.emplace(event_labels->begin() + begin, event_labels->begin() + end);
    }
    return out;
}

Trajectory trim_transient(const Trajectory& t, double keep_fraction) {
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
        throw ConfigError("keep fraction must lie in (0, 1]");
    }
    const std::size_t keep = fraction_count(keep_fraction, t.size());
    if (keep == 0) {
        throw ShapeError("trimming " + std::to_string(t.size()) + " states to fraction " +
                         io::format_double(keep_fraction) + " leaves nothing");
    }
    Trajectory out;
    out.params = t.params;
    out.initial = t.initial;
    out.first_step = t.first_step + (t.size() - keep);
    out.states.assign(t.states.end() - static_cast<std::ptrdiff_t>(keep), t.states.end());
    return out;
}

std::size_t steps_for_samples(std::size_t samples, double keep_fraction) {
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
        throw ConfigError("keep fraction must lie in (0, 1]");
    }
    const double exact = static_cast<double>(samples) / keep_fraction;
    const double nearest = std::round(exact);
    std::size_t steps = std::abs(exact - nearest) <= kCountSlack * std::max(1.0, nearest)
                            ? static_cast<std::size_t>(nearest)
                            : static_cast<std::size_t>(std::ceil(exact));
    // The tail must still hold `samples` states after flooring.
    while (fraction_count(keep_fraction, steps) < samples) {
        ++steps;
    }
    return steps;
}

WindowedDataset build_windows(const Trajectory& t, const WindowConfig& w,
                              const std::optional<CriterionConfig>& c) {
    validate(w);
    if (c && c->horizon_T != w.horizon_h) {
        throw ConfigError("criterion horizon " + std::to_string(c->horizon_T) +
                          " does not match window horizon " + std::to_string(w.horizon_h));
    }
    const std::size_t span = w.window_len_N + w.horizon_h;
    if (t.size() < span) {
        throw ShapeError("trajectory too short: " + std::to_string(t.size()) +
                         " states for window " + std::to_string(w.window_len_N) +
                         " + horizon " + std::to_string(w.horizon_h));
    }
    const std::size_t count = (t.size() - span) / w.stride + 1;
    const std::size_t width = 2 * w.window_len_N;

    WindowedDataset d;
    d.config = w;
    d.inputs = Matrix(count, width);
    d.targets.reserve(count);
    d.window_start.reserve(count);
    if (c) {
        d.event_labels.emplace();
        d.event_labels->reserve(count);
        d.theta = c->theta;
    }
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t start = k * w.stride;
        auto row = d.inputs.row(k);
        for (std::size_t j = 0; j < w.window_len_N; ++j) {
            row[2 * j] = t.states[start + j].x;
            row[2 * j + 1] = t.states[start + j].y;
        }
        const State& target = t.states[start + w.window_len_N - 1 + w.horizon_h];
        d.targets.push_back(target);
        d.window_start.push_back(start);
        if (c) {
            d.event_labels->push_back(target.y >= c->theta ? 1 : 0);
        }
    }
    return d;
}

SplitDataset chronological_split(const WindowedDataset& d, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train fraction must lie in (0, 1)");
    }
    const std::size_t n_train = fraction_count(train_fraction, d.size());
    if (n_train == 0 || n_train >= d.size()) {
        throw ShapeError("degenerate split: " + std::to_string(d.size()) +
                         " samples at fraction " + io::format_double(train_fraction) +
                         " leaves an empty side");
    }
    SplitDataset s;
    s.train = d.slice(0, n_train);
    s.test = d.slice(n_train, d.size());
    s.split_fraction = train_fraction;
    return s;
}

SplitDataset run_pipeline(const PipelineConfig& cfg) {
    const Trajectory orbit = iterate(cfg.initial, cfg.steps, cfg.map);
    const Trajectory tail = trim_transient(orbit, cfg.keep_fraction);
    return chronological_split(build_windows(tail, cfg.window, cfg.criterion), cfg.train_fraction);
}

// --- CSV -------------------------------------------------------------------

void write_dataset_csv(std::ostream& out, const WindowedDataset& d) {
    const std::size_t n = d.config.window_len_N;
    out << "# window=" << n << " horizon=" << d.config.horizon_h << " stride=" << d.config.stride;
    if (d.theta) {
        out << " theta=" << io::format_double(*d.theta);
    }
    out << '\n';
    out << "idx";
    for (std::size_t f = 0; f < 2 * n; ++f) {
        out << ",f" << f;
    }
    out << ",target_x,target_y";
    if (d.event_labels) {
        out << ",label";
    }
    out << '\n';
    for (std::size_t k = 0; k < d.size(); ++k) {
        out << k;
        for (double v : d.inputs.row(k)) {
            out << ',' << io::format_double(v);
        }
        out << ',' << io::format_double(d.targets[k].x) << ',' << io::format_double(d.targets[k].y);
        if (d.event_labels) {
            out << ',' << static_cast<int>((*d.event_labels)[k]);
        }
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t, const std::vector<std::size_t>& Ts,
                          double theta) {
    std::size_t max_T = 0;
    std::vector<std::vector<std::uint8_t>> labels;
    for (std::size_t T : Ts) {
        labels.push_back(label_extreme_events(t, CriterionConfig{theta, T}));
        max_T = std::max(max_T, T);
    }
    out << "n,x,y";
    for (std::size_t T : Ts) {
        out << ",label_T" << T;
    }
    out << '\n';
    const std::size_t rows = t.size() - max_T;
    for (std::size_t i = 0; i < rows; ++i) {
        out << t.first_step + i << ',' << io::format_double(t[i].x) << ',' << io::format_double(t[i].y);
        for (const auto& l : labels) {
            out << ',' << static_cast<int>(l[i]);
        }
        out << '\n';
    }
}

WindowedDataset read_dataset_csv(std::istream& in) {
    WindowedDataset d;
    std::string line;
    std::size_t line_no = 0;
    bool have_meta = false;
    std::size_t meta_window = 0;

    auto where = [&] { return "dataset line " + std::to_string(line_no); };

    // Metadata comments, then the header.
    std::vector<std::string_view> header;
    std::string header_line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# config:", 0) == 0) {
            continue;
        }
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string token;
            while (meta >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos) {
                    continue;
                }
                const std::string key = token.substr(0, eq);
                const std::string value = token.substr(eq + 1);
                if (key == "window") {
                    meta_window = static_cast<std::size_t>(io::parse_int(value, where()));
                    have_meta = true;
                } else if (key == "horizon") {
                    d.config.horizon_h = static_cast<std::size_t>(io::parse_int(value, where()));
                } else if (key == "stride") {
                    d.config.stride = static_cast<std::size_t>(io::parse_int(value, where()));
                } else if (key == "theta") {
                    d.theta = io::parse_double(value, where());
                }
            }
            continue;
        }
        header_line = line;
        header = io::split_csv_line(header_line);
        break;
    }
    if (header.empty()) {
        throw FormatError("dataset: missing header");
    }
    if (header.front() != "idx") {
        throw FormatError(where() + ": header must start with 'idx'");
    }
    std::size_t n_features = 0;
    while (1 + n_features < header.size() &&
           header[1 + n_features] == "f" + std::to_string(n_features)) {
        ++n_features;
    }
    if (n_features == 0 || n_features % 2 != 0) {
        throw FormatError(where() + ": expected an even, non-zero number of f columns");
    }
    std::size_t col = 1 + n_features;
    if (col + 2 > header.size() || header[col] != "target_x" || header[col + 1] != "target_y") {
        throw FormatError(where() + ": expected target_x,target_y after feature columns");
    }
    const bool has_label = header.size() == col + 3;
    if (has_label && header[col + 2] != "label") {
        throw FormatError(where() + ": unexpected column '" + std::string(header[col + 2]) + "'");
    }
    if (header.size() > col + 3) {
        throw FormatError(where() + ": too many columns");
    }
    d.config.window_len_N = n_features / 2;
    if (have_meta && meta_window != d.config.window_len_N) {
        throw FormatError("dataset: metadata window does not match feature columns");
    }
    if (has_label) {
        d.event_labels.emplace();
    }

    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw FormatError(where() + ": expected " + std::to_string(header.size()) +
                              " fields, found " + std::to_string(fields.size()));
        }
        const auto idx = io::parse_int(fields[0], where());
        if (idx < 0 || static_cast<std::size_t>(idx) != d.targets.size()) {
            throw FormatError(where() + ": idx " + std::string(fields[0]) + " out of sequence");
        }
        for (std::size_t f = 0; f < n_features; ++f) {
            values.push_back(io::parse_double(fields[1 + f], where()));
        }
        d.targets.push_back({io::parse_double(fields[col], where()),
                             io::parse_double(fields[col + 1], where())});
        d.window_start.push_back(static_cast<std::size_t>(idx) * d.config.stride);
        if (has_label) {
            const auto label = io::parse_int(fields[col + 2], where());
            if (label != 0 && label != 1) {
                throw FormatError(where() + ": label must be 0 or 1");
            }
            d.event_labels->push_back(static_cast<std::uint8_t>(label));
        }
    }
    d.inputs = Matrix::from_rows(d.targets.size(), n_features, std::move(values));
    return d;
}

}  // namespace chaosbench
