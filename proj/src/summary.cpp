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

#include "statmerge/summary.hpp"

#include <cmath>
#include <string>

#include "statmerge/errors.hpp"

namespace statmerge {

namespace {

// Rounding-artifact threshold for quantities that are non-negative in exact
// arithmetic. `scale` is the magnitude of the terms entering the subtraction
// that produced the value; anything negative within 1e-9 of that scale is
// rounding noise, anything below it is an inconsistency in the inputs.
double clamp_threshold(double scale) {
    return 1e-9 * std::max(1.0, scale);
}

double square(double v) {
    return v * v;
}

std::string describe(const SampleSummary& s) {
    return "(n=" + std::to_string(s.n) + ", mean=" + std::to_string(s.mean) +
           ", m2=" + std::to_string(s.m2) + ")";
}

}  // namespace

std::optional<double> SampleSummary::sample_variance() const {
    if (n < 2) return std::nullopt;
    return m2 / static_cast<double>(n - 1);
}

std::optional<double> SampleSummary::sample_sd() const {
    auto var = sample_variance();
    if (!var) return std::nullopt;
    return std::sqrt(*var);
}

std::optional<double> SampleSummary::population_variance() const {
    if (n < 1) return std::nullopt;
    return m2 / static_cast<double>(n);
}

const char* to_string(MergeKernel kernel) {
    return kernel == MergeKernel::textbook ? "textbook" : "stable";
}

void validate(const SampleSummary& s) {
    if (s.n < 0)
        throw InvalidInput("summary count must be non-negative, got " +
                           std::to_string(s.n));
    if (!std::isfinite(s.mean) || !std::isfinite(s.m2))
        throw InvalidInput("summary fields must be finite " + describe(s));
    if (s.m2 < 0.0)
        throw InvalidInput("m2 must be non-negative " + describe(s));
    if (s.n == 0 && (s.mean != 0.0 || s.m2 != 0.0))
        throw InvalidInput("empty summary must have zero mean and m2 " +
                           describe(s));
    if (s.n == 1 && s.m2 != 0.0)
        throw InvalidInput("singleton summary must have m2 = 0 " +
                           describe(s));
}

SampleSummary from_stats(std::int64_t n, double mean, double variance) {
    if (n < 2)
        throw InvalidInput(
            "sample variance is undefined for n < 2; got n = " +
            std::to_string(n));
    if (!std::isfinite(mean) || !std::isfinite(variance))
        throw InvalidInput("mean and variance must be finite");
    if (variance < 0.0)
        throw InvalidInput("variance must be non-negative, got " +
                           std::to_string(variance));
    return {n, mean, static_cast<double>(n - 1) * variance};
}

double sum_of_squares(const SampleSummary& s) {
    validate(s);
    if (s.n == 0) return 0.0;  // empty sum
    return s.m2 + static_cast<double>(s.n) * s.mean * s.mean;
}

double combined_mean(const SampleSummary& a, const SampleSummary& b) {
    validate(a);
    validate(b);
    if (a.n == 0 && b.n == 0)
        throw InvalidInput("mean of an empty union is undefined");
    if (a.n == 0) return b.mean;
    if (b.n == 0) return a.mean;
    double r = static_cast<double>(a.n);
    double s = static_cast<double>(b.n);
    return (r * a.mean + s * b.mean) / (r + s);
}

MergeReport combine_textbook(const SampleSummary& a, const SampleSummary& b) {
    validate(a);
    validate(b);
    // Empty operands short-circuit so the identity element is bit-exact.
    if (a.n == 0) return {b, 0.0, MergeKernel::textbook};
    if (b.n == 0) return {a, 0.0, MergeKernel::textbook};

    double r = static_cast<double>(a.n);
    double s = static_cast<double>(b.n);
    double weighted = r * a.mean + s * b.mean;
    // The classical form: large squared-mean terms that mostly cancel.
    double between =
        r * square(a.mean) + s * square(b.mean) - square(weighted) / (r + s);
    double scale = a.m2 + b.m2 + r * square(a.mean) + s * square(b.mean) +
                   square(weighted) / (r + s);
    if (between < 0.0) {
        if (between < -clamp_threshold(scale))
            throw InconsistencyError("between-group term below rounding "
                                     "threshold in textbook merge");
        between = 0.0;
    }
    SampleSummary combined{a.n + b.n, weighted / (r + s),
                           a.m2 + b.m2 + between};
    return {combined, between, MergeKernel::textbook};
}

MergeReport combine_stable(const SampleSummary& a, const SampleSummary& b) {
    validate(a);
    validate(b);
    if (a.n == 0) return {b, 0.0, MergeKernel::stable};
    if (b.n == 0) return {a, 0.0, MergeKernel::stable};

    double r = static_cast<double>(a.n);
    double s = static_cast<double>(b.n);
    double delta = b.mean - a.mean;
    double between = delta * delta * r * s / (r + s);  // never negative
    SampleSummary combined{a.n + b.n, a.mean + s * delta / (r + s),
                           a.m2 + b.m2 + between};
    return {combined, between, MergeKernel::stable};
}

MergeReport combine(const SampleSummary& a, const SampleSummary& b,
                    MergeKernel kernel) {
    return kernel == MergeKernel::textbook ? combine_textbook(a, b)
                                           : combine_stable(a, b);
}

MergeReport combine_all(std::span<const SampleSummary> parts,
                        MergeKernel kernel) {
    MergeReport acc{SampleSummary::empty(), 0.0, kernel};
    for (const SampleSummary& part : parts) {
        MergeReport step = combine(acc.combined, part, kernel);
        acc.combined = step.combined;
        acc.between_term += step.between_term;
    }
    if (acc.combined.n == 0)
        throw InvalidInput("cannot combine: no non-empty summaries given");
    return acc;
}

namespace {

MergeReport fold_balanced(std::span<const SampleSummary> parts,
                          MergeKernel kernel) {
    if (parts.size() == 1)
        return combine(SampleSummary::empty(), parts[0], kernel);
    std::size_t half = parts.size() / 2;
    MergeReport left = fold_balanced(parts.first(half), kernel);
    MergeReport right = fold_balanced(parts.subspan(half), kernel);
    MergeReport top = combine(left.combined, right.combined, kernel);
    top.between_term += left.between_term + right.between_term;
    return top;
}

}  // namespace

MergeReport combine_all_balanced(std::span<const SampleSummary> parts,
                                 MergeKernel kernel) {
    if (parts.empty())
        throw InvalidInput("cannot combine: no non-empty summaries given");
    MergeReport result = fold_balanced(parts, kernel);
    if (result.combined.n == 0)
        throw InvalidInput("cannot combine: no non-empty summaries given");
    return result;
}

SampleSummary recover_component(const SampleSummary& total,
                                const SampleSummary& known) {
    validate(total);
    validate(known);
    if (total.n <= known.n)
        throw InconsistencyError(
            "infeasible sizes: total n = " + std::to_string(total.n) +
            " does not exceed known n = " + std::to_string(known.n));
    if (known.n == 0) return total;

    std::int64_t missing_n = total.n - known.n;
    double nn = static_cast<double>(total.n);
    double r = static_cast<double>(known.n);
    double a = static_cast<double>(missing_n);

    double missing_mean = (nn * total.mean - r * known.mean) / a;
    if (!std::isfinite(missing_mean))
        throw InconsistencyError("recovered mean overflows; inputs are not "
                                 "a feasible total/part pair");

    double delta = missing_mean - known.mean;
    double between = delta * delta * r * a / nn;
    double m2 = total.m2 - known.m2 - between;
    double threshold = clamp_threshold(total.m2 + known.m2 + between);
    if (m2 < -threshold) {
        // Smallest total variance consistent with the claimed sizes/means:
        // the one where the missing group has zero dispersion.
        double min_variance = (known.m2 + between) / (nn - 1.0);
        throw InconsistencyError(
            "claimed total cannot contain the claimed part: residual m2 = " +
            std::to_string(m2) +
            "; minimal consistent total variance is " +
            std::to_string(min_variance));
    }
    if (m2 < 0.0) m2 = 0.0;
    if (missing_n == 1 && m2 != 0.0) {
        if (m2 > threshold)
            throw InconsistencyError(
                "sizes leave a single missing value but residual m2 = " +
                std::to_string(m2) + " is not zero");
        m2 = 0.0;
    }
    return {missing_n, missing_mean, m2};
}

double variance_from_power_sums(const PowerSums& ps) {
    if (ps.n < 2)
        throw InvalidInput(
            "variance from power sums requires n >= 2, got n = " +
            std::to_string(ps.n));
    if (!std::isfinite(ps.sum) || !std::isfinite(ps.sum_sq))
        throw InvalidInput("power sums must be finite");
    if (ps.sum_sq < 0.0)
        throw InvalidInput("sum of squares must be non-negative, got " +
                           std::to_string(ps.sum_sq));

    double n = static_cast<double>(ps.n);
    double mean = ps.sum / n;
    double numerator = ps.sum_sq - n * square(mean);
    if (numerator < 0.0) {
        double scale = ps.sum_sq + n * square(mean);
        if (numerator < -clamp_threshold(scale))
            throw InconsistencyError(
                "power sums violate n*sum_sq >= sum^2 beyond rounding: no "
                "real dataset has these sums");
        numerator = 0.0;
    }
    return numerator / (n - 1.0);
}

}  // namespace statmerge
