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

#include "chaosbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "chaosbench/errors.hpp"
#include "chaosbench/io.hpp"

namespace chaosbench {

RegressionMetrics regression_metrics(const Matrix& predictions, const WindowedDataset& test) {
    if (test.size() == 0) {
        throw ShapeError("cannot evaluate on an empty test set");
    }
    if (predictions.rows() != test.size() || predictions.cols() != 2) {
        throw ShapeError("prediction matrix does not match the test set");
    }
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < test.size(); ++k) {
        const double dx = predictions(k, 0) - test.targets[k].x;
        const double dy = predictions(k, 1) - test.targets[k].y;
        sx += dx * dx;
        sy += dy * dy;
    }
    const double n = static_cast<double>(test.size());
    return {(sx + sy) / (2.0 * n), sx / n};
}

RegressionMetrics evaluate_regression(const Forecaster& model, const WindowedDataset& test) {
    if (!model.trained()) {
        throw ConfigError("model has not been trained");
    }
    if (test.size() == 0) {
        throw ShapeError("cannot evaluate on an empty test set");
    }
    return regression_metrics(model.predict(test.inputs), test);
}

EventMetrics event_metrics(const Matrix& predictions, std::span<const std::uint8_t> labels,
                           double theta) {
    if (labels.empty() || predictions.rows() != labels.size() || predictions.cols() != 2) {
        throw ShapeError("predictions and labels disagree in length");
    }
    std::size_t hits = 0, positives = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const std::uint8_t predicted = predictions(k, 1) >= theta ? 1 : 0;
        hits += predicted == labels[k] ? 1 : 0;
        positives += labels[k];
    }
    const double n = static_cast<double>(labels.size());
    const double p1 = static_cast<double>(positives) / n;
    return {static_cast<double>(hits) / n, std::max(p1, 1.0 - p1)};
}

EventMetrics evaluate_event_accuracy(const Forecaster& model, const WindowedDataset& test,
                                     const CriterionConfig& c) {
    if (!test.event_labels) {
        throw ConfigError("test set carries no event labels");
    }
    if (test.config.horizon_h != c.horizon_T) {
        throw ConfigError("test horizon " + std::to_string(test.config.horizon_h) +
                          " differs from criterion horizon " + std::to_string(c.horizon_T));
    }
    if (!model.trained()) {
        throw ConfigError("model has not been trained");
    }
    return event_metrics(model.predict(test.inputs), *test.event_labels, c.theta);
}

namespace {

struct Summary {
    double mean;
    double std;
};

Summary summarize(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    if (values.front() == values.back()) {
        // sum / n can miss v by an ulp; identical values have exactly this mean and no spread.
        return {values.front(), 0.0};
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / n)};
}

std::string opt(const std::optional<double>& v) { return v ? io::format_double(*v) : ""; }

}  // namespace

std::vector<AggregateRow> aggregate_seeds(std::span<const EvalReport> reports) {
    using Key = std::tuple<std::string, std::string, std::size_t, std::size_t>;
    std::map<Key, std::vector<const EvalReport*>> groups;
    for (const EvalReport& r : reports) {
        groups[{r.model, r.profile, r.samples, r.horizon}].push_back(&r);
    }
    std::vector<AggregateRow> out;
    for (const auto& [key, members] : groups) {
        const auto& [model, profile, samples, horizon] = key;
        auto emit = [&](const std::string& metric, auto getter) {
            std::vector<double> values;
            for (const EvalReport* r : members) values.push_back(getter(*r));
            const Summary s = summarize(std::move(values));
            out.push_back({model, profile, samples, horizon, metric, s.mean, s.std, members.size()});
        };
        const bool has_events = std::all_of(members.begin(), members.end(), [](const EvalReport* r) {
            return r->event_accuracy.has_value() && r->event_base_rate.has_value();
        });
        // Alphabetical metric order.
        if (has_events) {
            emit("base_rate", [](const EvalReport& r) { return *r.event_base_rate; });
            emit("event_acc", [](const EvalReport& r) { return *r.event_accuracy; });
        }
        emit("mse_both", [](const EvalReport& r) { return r.mse_both; });
        emit("mse_x", [](const EvalReport& r) { return r.mse_x; });
    }
    return out;
}

std::string report_csv_header() {
    return "model,profile,samples,horizon,seed,mse_both,mse_x,event_acc,base_rate";
}

std::string report_csv_row(const EvalReport& r) {
    return r.model + ',' + r.profile + ',' + std::to_string(r.samples) + ',' +
           std::to_string(r.horizon) + ',' + std::to_string(r.seed) + ',' +
           io::format_double(r.mse_both) + ',' + io::format_double(r.mse_x) + ',' +
           opt(r.event_accuracy) + ',' + opt(r.event_base_rate);
}

void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports) {
    out << report_csv_header() << '\n';
    for (const EvalReport& r : reports) out << report_csv_row(r) << '\n';
}

std::vector<EvalReport> read_reports_csv(std::istream& in) {
    std::vector<EvalReport> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::string where = "report line " + std::to_string(line_no);
        const auto f = io::split_csv_line(line);
        if (!header_seen) {
            if (f.size() < 9 || f[0] != "model" || f[8] != "base_rate") {
                throw FormatError(where + ": expected header '" + report_csv_header() + "'");
            }
            header_seen = true;
            continue;
        }
        if (f.size() < 9) {
            throw FormatError(where + ": expected at least 9 fields");
        }
        EvalReport r;
        r.model = std::string(f[0]);
        r.profile = std::string(f[1]);
        r.samples = static_cast<std::size_t>(io::parse_int(f[2], where));
        r.horizon = static_cast<std::size_t>(io::parse_int(f[3], where));
        r.seed = io::parse_u64(f[4], where);
        r.mse_both = io::parse_double(f[5], where);
        r.mse_x = io::parse_double(f[6], where);
        if (!f[7].empty()) r.event_accuracy = io::parse_double(f[7], where);
        if (!f[8].empty()) r.event_base_rate = io::parse_double(f[8], where);
        out.push_back(std::move(r));
    }
    if (!header_seen) {
        throw FormatError("report: missing header");
    }
    return out;
}

void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows) {
    out << "model,profile,samples,horizon,metric,mean,std,n_seeds\n";
    for (const AggregateRow& r : rows) {
        out << r.model << ',' << r.profile << ',' << r.samples << ',' << r.horizon << ',' << r.metric
            << ',' << io::format_double(r.mean) << ',' << io::format_double(r.std) << ','
            << r.n_seeds << '\n';
    }
}

}  // namespace chaosbench
