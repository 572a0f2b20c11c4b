// Copyright 2026 the statmerge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace statmerge {

/// Malformed values or violated preconditions (bad counts, negative
/// variances, non-finite numbers). Maps to exit code 1 in the CLI.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input that is syntactically broken (CSV/JSONL rows, raw data files).
/// Carries the 1-based line number and the offending field.
class ParseError : public InvalidInput {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : InvalidInput("line " + std::to_string(line) + ", field '" + field +
                       "': " + what),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// Summaries that cannot jointly describe any real dataset: infeasible
/// sizes, or a residual sum of squared deviations that is negative beyond
/// the rounding threshold. Maps to exit code 2 in the CLI.
class InconsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace statmerge
