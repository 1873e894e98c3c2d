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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "chaosbench/kernels.hpp"

namespace chaosbench::kernels {

namespace {

const Backend* detect() noexcept {
    if (const char* forced = std::getenv("CHAOSBENCH_SIMD")) {
        if (std::string_view(forced) == "scalar") {
            return &scalar_backend();
        }
    }
    if (const Backend* b = avx2_backend()) {
        return b;
    }
    if (const Backend* b = neon_backend()) {
        return b;
    }
    return &scalar_backend();
}

std::atomic<const Backend*>& current() noexcept {
    static std::atomic<const Backend*> backend{detect()};
    return backend;
}

}  // namespace

const Backend& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) noexcept {
    const Backend* chosen = nullptr;
    if (name == "scalar") {
        chosen = &scalar_backend();
    } else if (name == "avx2") {
        chosen = avx2_backend();
    } else if (name == "neon") {
        chosen = neon_backend();
    } else if (name == "auto") {
        chosen = detect();
    }
    if (chosen == nullptr) {
        return false;
    }
    current().store(chosen, std::memory_order_relaxed);
    return true;
}

}  // namespace chaosbench::kernels
