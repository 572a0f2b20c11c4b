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

#include "statmerge/oracle.hpp"

#include <algorithm>
#include <string>

#include "statmerge/errors.hpp"

namespace statmerge::oracle {

RawDataset::RawDataset(std::vector<double> values)
    : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw InvalidInput("dataset value at index " + std::to_string(i) +
                               " is not finite");
    }
}

SampleSummary summarize(const RawDataset& data) {
    const std::vector<double>& x = data.values();
    if (x.empty()) return SampleSummary::empty();

    double n = static_cast<double>(x.size());
    CompensatedSum total;
    for (double v : x) total.add(v);
    double mean = total.value() / n;

    CompensatedSum dev;     // residual sum of deviations
    CompensatedSum dev_sq;  // sum of squared deviations
    for (double v : x) {
        double d = v - mean;
        dev.add(d);
        dev_sq.add(d * d);
    }
    // Correction removes the bias from the rounded mean.
    double m2 = dev_sq.value() - dev.value() * dev.value() / n;
    return {static_cast<std::int64_t>(x.size()), mean, std::max(0.0, m2)};
}

SampleSummary concat_summarize(const RawDataset& x, const RawDataset& y) {
    std::vector<double> pooled;
    pooled.reserve(x.size() + y.size());
    pooled.insert(pooled.end(), x.values().begin(), x.values().end());
    pooled.insert(pooled.end(), y.values().begin(), y.values().end());
    return summarize(RawDataset(std::move(pooled)));
}

PowerSums power_sums(const RawDataset& data) {
    CompensatedSum sum;
    CompensatedSum sum_sq;
    for (double v : data.values()) {
        sum.add(v);
        sum_sq.add(v * v);
    }
    return {static_cast<std::int64_t>(data.size()), sum.value(),
            sum_sq.value()};
}

}  // namespace statmerge::oracle
