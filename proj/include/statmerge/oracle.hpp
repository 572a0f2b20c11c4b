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

#include <cmath>
#include <initializer_list>
#include <vector>

#include "statmerge/summary.hpp"

namespace statmerge::oracle {

/// Neumaier-compensated accumulator. The running error term recovers the
/// low-order bits lost by plain addition, so sums of desk-scale vectors are
/// faithful to the last ulp.
class CompensatedSum {
public:
    void add(double value) {
        double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            comp_ += (sum_ - t) + value;
        else
            comp_ += (value - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// A plain vector of data values; construction rejects NaN and infinity.
/// May be empty.
class RawDataset {
public:
    RawDataset() = default;
    explicit RawDataset(std::vector<double> values);
    RawDataset(std::initializer_list<double> values)
        : RawDataset(std::vector<double>(values)) {}

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
};

/// Definitional summary: mean by compensated summation, then M2 as the
/// compensated sum of squared deviations with the first-order correction
/// term. Deliberately two-pass; this is the ground truth the merge kernels
/// are judged against, so it must out-precision them.
SampleSummary summarize(const RawDataset& data);

/// summarize over the multiset union of x and y. Reference for every merge
/// property: the merged summary of the parts must equal this.
SampleSummary concat_summarize(const RawDataset& x, const RawDataset& y);

/// (n, sum x, sum x^2) with compensated summation.
PowerSums power_sums(const RawDataset& data);

}  // namespace statmerge::oracle
