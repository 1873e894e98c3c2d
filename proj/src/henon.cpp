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

#include "chaosbench/henon.hpp"

#include <cmath>
#include <string>

#include "chaosbench/errors.hpp"

namespace chaosbench {

namespace {

bool escaped(const State& s) {
    return !std::isfinite(s.x) || !std::isfinite(s.y) || std::abs(s.x) > kDivergenceBound ||
           std::abs(s.y) > kDivergenceBound;
}

}  // namespace

State step(const State& s, const MapParams& p) {
    State next{1.0 - p.a * s.x * s.x + s.y, p.b * s.x};
    if (!std::isfinite(next.x) || !std::isfinite(next.y)) {
        throw DivergenceError("henon step produced a non-finite state");
    }
    return next;
}

Trajectory iterate(const State& initial, std::size_t n_steps, const MapParams& p) {
    if (n_steps == 0) {
        throw ConfigError("iterate: n_steps must be >= 1");
    }
    Trajectory t;
    t.params = p;
    t.initial = initial;
    t.states.reserve(n_steps);
    State s = initial;
    for (std::size_t k = 0; k < n_steps; ++k) {
        s = State{1.0 - p.a * s.x * s.x + s.y, p.b * s.x};
        if (escaped(s)) {
            throw DivergenceError("orbit diverged at step " + std::to_string(k + 1) + " from (" +
                                  std::to_string(initial.x) + ", " + std::to_string(initial.y) + ")");
        }
        t.states.push_back(s);
    }
    return t;
}

double jacobian_determinant(const State& s, const MapParams& p) {
    // d(x')/dx * d(y')/dy - d(x')/dy * d(y')/dx with y' independent of y.
    const double dxdx = -2.0 * p.a * s.x;
    const double dydy = 0.0;
    return dxdx * dydy - 1.0 * p.b;
}

std::vector<std::uint8_t> label_extreme_events(const Trajectory& t, const CriterionConfig& c) {
    if (c.horizon_T < 1) {
        throw ConfigError("criterion horizon T must be >= 1");
    }
    if (t.size() <= c.horizon_T) {
        throw ShapeError("trajectory too short: length " + std::to_string(t.size()) +
                         " <= horizon " + std::to_string(c.horizon_T));
    }
    std::vector<std::uint8_t> labels(t.size() - c.horizon_T);
    for (std::size_t n = 0; n < labels.size(); ++n) {
        labels[n] = t.states[n + c.horizon_T].y >= c.theta ? 1 : 0;
    }
    return labels;
}

State fixed_point(const MapParams& p) {
    // Stable form of the positive root to avoid cancellation.
    const double lin = 1.0 - p.b;
    const double disc = std::sqrt(lin * lin + 4.0 * p.a);
    const double x = 2.0 / (lin + disc);
    return {x, p.b * x};
}

}  // namespace chaosbench
