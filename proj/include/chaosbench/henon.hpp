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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace chaosbench {

struct MapParams {
    double a = 1.4;
    double b = 0.3;
};

struct State {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const State&, const State&) = default;
};

/// Threshold criterion y[n+T] >= theta that marks index n as an extreme event.
struct CriterionConfig {
    double theta = 0.3;
    std::size_t horizon_T = 1;
};

/// Ordered orbit. `states[0]` is one step after `initial`; the seed is not stored.
///
/// `first_step` is the 1-based iteration index of `states[0]` in the orbit that
/// produced it, so a trajectory trimmed to its tail still knows where it came from.
struct Trajectory {
    std::vector<State> states;
    MapParams params;
    State initial;
    std::size_t first_step = 1;

    std::size_t size() const noexcept { return states.size(); }
    const State& operator[](std::size_t i) const { return states[i]; }
};

inline constexpr double kDivergenceBound = 1e10;

/// One application of the Henon map. Throws DivergenceError on a non-finite result.
State step(const State& s, const MapParams& p);

/// Orbit of exactly `n_steps` states starting one step after `initial`.
/// Throws DivergenceError once any coordinate is non-finite or exceeds 1e10.
Trajectory iterate(const State& initial, std::size_t n_steps, const MapParams& p = {});

/// Determinant of the map's Jacobian; equals -b everywhere.
double jacobian_determinant(const State& s, const MapParams& p);

/// label[n] = 1 iff states[n + T].y >= theta; length is size() - T.
std::vector<std::uint8_t> label_extreme_events(const Trajectory& t, const CriterionConfig& c);

/// Positive fixed point of the map (root of a x^2 + (1 - b) x - 1 = 0).
State fixed_point(const MapParams& p);

}  // namespace chaosbench
