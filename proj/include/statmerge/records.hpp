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

#include <iosfwd>
#include <string>
#include <vector>

#include "statmerge/summary.hpp"

namespace statmerge::cli {

/// One labeled study as ingested from a file. Studies report standard
/// deviation by convention; the summary already holds the converted m2.
struct StudyRecord {
    std::string label;
    SampleSummary summary;
};

enum class OutputFormat { table, jsonl };

struct RunConfig {
    MergeKernel kernel = MergeKernel::stable;
    /// Interpret the sd column/field as a variance instead.
    bool variance_input = false;
    OutputFormat format = OutputFormat::table;
    /// Significant decimal digits for display strings; 17 is lossless.
    int precision = 6;
};

/// Reads labeled records from CSV (header `label,n,mean,sd`) or JSON lines
/// (objects with the same fields; `m2` or `variance` take precedence over
/// `sd` when present, so re-ingesting our own output is lossless). The
/// format is detected from the first significant line. Blank lines are
/// skipped. Errors carry the 1-based line number and field name.
std::vector<StudyRecord> parse_records(std::istream& in,
                                       const RunConfig& cfg);

/// Reads a raw-data file: one real per line, `#` comment lines and blank
/// lines ignored. Non-finite or unparseable values are errors.
std::vector<double> read_raw_values(std::istream& in);

/// "%.*g" with the given number of significant digits.
std::string format_double(double value, int precision);

}  // namespace statmerge::cli
