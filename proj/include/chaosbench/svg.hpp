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

#include <string>
#include <vector>

// Small, dependency-free SVG chart writers. Output is deterministic: numbers are
// printed with fixed precision and elements appear in input order.

namespace chaosbench::svg {

struct PointGroup {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

struct Series {
    std::string label;
    std::string color;
    std::vector<double> values;  // one per category / x position
    std::vector<double> errors;  // optional, same length as values
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string metadata;  // embedded verbatim (escaped) in <metadata>
    bool log_y = false;
};

std::string scatter(const Chart& chart, const std::vector<PointGroup>& groups);

/// One marker per category per series (a point plot).
std::string category_points(const Chart& chart, const std::vector<std::string>& categories,
                            const std::vector<Series>& series);

std::string grouped_bars(const Chart& chart, const std::vector<std::string>& categories,
                         const std::vector<Series>& series);

/// Lines over numeric x with optional symmetric error bars.
std::string lines(const Chart& chart, const std::vector<double>& x, const std::vector<Series>& series);

/// values[r][c]; colour is linear in log10(value) from light (min) to dark (max).
std::string heatmap(const Chart& chart, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels,
                    const std::vector<std::vector<double>>& values);

std::string escape(const std::string& text);

/// Colour for series i of a fixed palette.
std::string palette(std::size_t i);

}  // namespace chaosbench::svg
