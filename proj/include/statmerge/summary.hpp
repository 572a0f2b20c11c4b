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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace statmerge {

/// Mergeable summary of a dataset: size, mean, and M2 = sum of squared
/// deviations from the mean. M2 rather than the variance is stored so that
/// empty (n = 0) and singleton (n = 1) groups are representable; the sample
/// variance M2/(n-1) is a derived view that only exists for n >= 2.
///
/// Conventions: n = 0 implies mean = m2 = 0 (the merge identity element);
/// n = 1 implies m2 = 0. All values are immutable plain data; every
/// operation below is a pure function, safe to call concurrently.
struct SampleSummary {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    static SampleSummary empty() { return {}; }
    static SampleSummary singleton(double value) { return {1, value, 0.0}; }

    /// Bessel-corrected sample variance M2/(n-1); absent for n < 2.
    std::optional<double> sample_variance() const;
    /// sqrt of the sample variance; absent for n < 2.
    std::optional<double> sample_sd() const;
    /// Population-divisor view M2/n; absent for n < 1. Never used by the
    /// merge algebra.
    std::optional<double> population_variance() const;

    bool operator==(const SampleSummary&) const = default;
};

/// Raw power sums (n, sum of x, sum of x^2). Feasible sums satisfy
/// n * sum_sq >= sum^2 up to rounding (Cauchy-Schwarz).
struct PowerSums {
    std::int64_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    bool operator==(const PowerSums&) const = default;
};

enum class MergeKernel { textbook, stable };

const char* to_string(MergeKernel kernel);

/// Merge result plus diagnostics. The identity
///   combined.m2 == a.m2 + b.m2 + between_term
/// holds exactly as evaluated, for both kernels. between_term is the
/// cross-group contribution to M2; it is >= 0 after rounding-artifact
/// clamping and strictly positive when both groups are non-empty with
/// different means.
struct MergeReport {
    SampleSummary combined;
    double between_term = 0.0;
    MergeKernel kernel = MergeKernel::stable;
};

/// Throws InvalidInput unless s satisfies the representation invariants
/// (finite fields, n >= 0, m2 >= 0, degenerate-size conventions).
void validate(const SampleSummary& s);

/// Builds a summary from reported statistics. Requires n >= 2 (the sample
/// variance is undefined below that), variance >= 0, finite inputs.
/// Stores m2 = (n-1) * variance.
SampleSummary from_stats(std::int64_t n, double mean, double variance);

/// Sum of squares of the underlying data, m2 + n * mean^2. Empty summary
/// yields 0.
double sum_of_squares(const SampleSummary& s);

/// Size-weighted mean of the union, (R*xbar + A*ybar)/(R + A). Empty
/// operands short-circuit; both empty is an error.
double combined_mean(const SampleSummary& a, const SampleSummary& b);

/// Merge preserving the classical pooled-variance expression: the
/// between-group term is evaluated as
///   R*xbar^2 + A*ybar^2 - (R*xbar + A*ybar)^2/(R+A)
/// which cancels catastrophically when |mean| >> sd. Kept as the
/// reference form; prefer combine_stable for computation.
MergeReport combine_textbook(const SampleSummary& a, const SampleSummary& b);

/// Algebraically equivalent merge with the between-group term in the
/// cancellation-free form delta^2 * R*A/(R+A), delta = ybar - xbar, and the
/// mean updated incrementally. Matches the concatenation oracle to 1e-9
/// relative even at |mean|/sd ~ 1e8.
MergeReport combine_stable(const SampleSummary& a, const SampleSummary& b);

MergeReport combine(const SampleSummary& a, const SampleSummary& b,
                    MergeKernel kernel);

/// Left fold of pairwise merges in input order (deterministic). Empty
/// summaries are no-ops; a list with no non-empty summary is an error.
/// between_term accumulates the per-merge cross-group contributions, so
/// combined.m2 == sum of part m2 + between_term.
MergeReport combine_all(std::span<const SampleSummary> parts,
                        MergeKernel kernel = MergeKernel::stable);

/// Balanced-tree fold over the same parts. Same result as combine_all up
/// to rounding; exists for order-insensitivity checks and parallel use.
MergeReport combine_all_balanced(std::span<const SampleSummary> parts,
                                 MergeKernel kernel = MergeKernel::stable);

/// Inverse merge: given the summary of a union and the summary of one part,
/// recovers the other part. Requires total.n > known.n >= 0. A residual m2
/// that is negative beyond the rounding threshold means the claimed total
/// cannot contain the claimed part; that raises InconsistencyError with the
/// minimal consistent total variance in the message.
SampleSummary recover_component(const SampleSummary& total,
                                const SampleSummary& known);

/// Sample variance from raw power sums, [sum_sq - n*(sum/n)^2]/(n-1).
/// Requires n >= 2. A small negative numerator is clamped to 0; a
/// Cauchy-Schwarz violation beyond the rounding threshold raises
/// InconsistencyError.
double variance_from_power_sums(const PowerSums& ps);

}  // namespace statmerge
