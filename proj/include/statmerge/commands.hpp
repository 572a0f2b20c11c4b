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

#include <ostream>
#include <vector>

#include "statmerge/errors.hpp"
#include "statmerge/oracle.hpp"
#include "statmerge/records.hpp"
#include "statmerge/summary.hpp"

namespace statmerge::cli {

// Exit-code contract: 0 valid, 1 malformed input, 2 infeasible or
// inconsistent summaries, 3 tolerance failure in `check`. The commands
// return 0 (or 3 for check) and throw for the error classes;
// run_with_exit_codes maps exceptions to 1/2 in one place.

/// Folds all records with the configured kernel and renders the result.
/// Throws InvalidInput when there are no records.
int cmd_combine(const std::vector<StudyRecord>& records, const RunConfig& cfg,
                std::ostream& out);

/// Recovers the missing part of `total` not covered by `known` and renders
/// it. Throws InconsistencyError for infeasible or fabricated inputs.
int cmd_recover(const StudyRecord& total, const StudyRecord& known,
                const RunConfig& cfg, std::ostream& out);

/// Summarizes both raw datasets, merges with both kernels, compares against
/// the concatenation oracle, and renders all three with relative errors.
/// Returns 3 when the selected kernel misses the 1e-9 relative tolerance;
/// the non-selected kernel only warns on `err`.
int cmd_check(const oracle::RawDataset& x, const oracle::RawDataset& y,
              const RunConfig& cfg, std::ostream& out, std::ostream& err);

template <typename F>
int run_with_exit_codes(F&& command, std::ostream& err) {
    try {
        return command();
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const InconsistencyError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace statmerge::cli
