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

#include <stdexcept>
#include <string>

namespace chaosbench {

/// Process exit codes used by the command-line tool. Stable across releases.
enum class ExitCode : int {
    ok = 0,
    failure = 1,  // I/O or malformed input files
    usage = 2,
    divergence = 3,
    shape = 4,
    numeric = 5,
    partial_grid = 6,
};

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual ExitCode exit_code() const noexcept { return ExitCode::failure; }
};

/// An orbit left the bounded region (|coordinate| > 1e10 or non-finite).
class DivergenceError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::divergence; }
};

/// Incompatible dimensions: matrix shapes, window widths, model/dataset mismatch.
class ShapeError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::shape; }
};

/// Non-finite loss or parameters during training.
class NumericError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::numeric; }
};

/// Invalid configuration value or a precondition on sizes (too short, empty split, ...).
class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::usage; }
};

/// Malformed file contents (CSV, checkpoint).
class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace chaosbench
