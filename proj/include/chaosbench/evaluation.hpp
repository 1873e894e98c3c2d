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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaosbench/dataset.hpp"
#include "chaosbench/models.hpp"

namespace chaosbench {

struct EvalReport {
    std::string model;
    std::string profile;
    std::size_t samples = 0;
    std::size_t horizon = 1;
    std::uint64_t seed = 0;
    double mse_both = 0.0;  // mean over both coordinates
    double mse_x = 0.0;     // x coordinate only
    std::optional<double> event_accuracy;
    std::optional<double> event_base_rate;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct RegressionMetrics {
    double mse_both = 0.0;
    double mse_x = 0.0;
};

struct EventMetrics {
    double accuracy = 0.0;
    double base_rate = 0.0;  // frequency of the majority class among true labels
};

/// Both MSE conventions over the whole test set.
RegressionMetrics regression_metrics(const Matrix& predictions, const WindowedDataset& test);
RegressionMetrics evaluate_regression(const Forecaster& model, const WindowedDataset& test);

/// Thresholds predicted y at the horizon against theta and scores the labels.
EventMetrics event_metrics(const Matrix& predictions, std::span<const std::uint8_t> labels,
                           double theta);
EventMetrics evaluate_event_accuracy(const Forecaster& model, const WindowedDataset& test,
                                     const CriterionConfig& c);

struct AggregateRow {
    std::string model;
    std::string profile;
    std::size_t samples = 0;
    std::size_t horizon = 0;
    std::string metric;
    double mean = 0.0;
    double std = 0.0;  // population standard deviation over seeds
    std::size_t n_seeds = 0;

    friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

/// Groups by (model, profile, samples, horizon) and summarizes mse_both, mse_x
/// and, where every report in the group has it, event_acc and base_rate. Rows
/// come out sorted by group key then metric name; values are summed in sorted
/// order so the result does not depend on report order.
std::vector<AggregateRow> aggregate_seeds(std::span<const EvalReport> reports);

void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports);
std::vector<EvalReport> read_reports_csv(std::istream& in);
void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows);

std::string report_csv_header();
std::string report_csv_row(const EvalReport& r);

}  // namespace chaosbench
