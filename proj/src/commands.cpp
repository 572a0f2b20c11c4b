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

#include "statmerge/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include <json.hpp>

namespace statmerge::cli {

namespace {

using nlohmann::json;

constexpr double kCheckTolerance = 1e-9;

double relative_error(double actual, double expected) {
    double scale = std::max(std::abs(actual), std::abs(expected));
    if (scale == 0.0) return 0.0;
    return std::abs(actual - expected) / scale;
}

json record_json(const std::string& label, const SampleSummary& s,
                 int precision) {
    json j;
    j["label"] = label;
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["m2"] = s.m2;
    json display;
    display["mean"] = format_double(s.mean, precision);
    if (auto sd = s.sample_sd()) {
        j["sd"] = *sd;
        display["sd"] = format_double(*sd, precision);
    } else {
        j["sd"] = nullptr;
    }
    if (auto var = s.sample_variance()) {
        j["variance"] = *var;
        display["variance"] = format_double(*var, precision);
    } else {
        j["variance"] = nullptr;
    }
    j["display"] = std::move(display);
    return j;
}

void print_summary_table(std::ostream& out, const SampleSummary& s,
                         int precision) {
    out << std::left;
    out << std::setw(10) << "n" << s.n << "\n";
    out << std::setw(10) << "mean" << format_double(s.mean, precision)
        << "\n";
    auto sd = s.sample_sd();
    out << std::setw(10) << "sd"
        << (sd ? format_double(*sd, precision) : "-") << "\n";
    auto var = s.sample_variance();
    out << std::setw(10) << "variance"
        << (var ? format_double(*var, precision) : "-") << "\n";
}

}  // namespace

int cmd_combine(const std::vector<StudyRecord>& records, const RunConfig& cfg,
                std::ostream& out) {
    if (records.empty())
        throw InvalidInput("no records to combine");
    std::vector<SampleSummary> parts;
    parts.reserve(records.size());
    for (const StudyRecord& r : records) parts.push_back(r.summary);
    MergeReport report = combine_all(parts, cfg.kernel);

    if (cfg.format == OutputFormat::jsonl) {
        json j = record_json("combined", report.combined, cfg.precision);
        j["kernel"] = to_string(report.kernel);
        j["between_term"] = report.between_term;
        out << j.dump() << "\n";
    } else {
        out << std::left << std::setw(10) << "kernel"
            << to_string(report.kernel) << "\n";
        print_summary_table(out, report.combined, cfg.precision);
        out << std::left << std::setw(10) << "between"
            << format_double(report.between_term, cfg.precision) << "\n";
    }
    return 0;
}

int cmd_recover(const StudyRecord& total, const StudyRecord& known,
                const RunConfig& cfg, std::ostream& out) {
    SampleSummary missing = recover_component(total.summary, known.summary);
    if (cfg.format == OutputFormat::jsonl) {
        out << record_json("missing", missing, cfg.precision).dump() << "\n";
    } else {
        print_summary_table(out, missing, cfg.precision);
    }
    return 0;
}

int cmd_check(const oracle::RawDataset& x, const oracle::RawDataset& y,
              const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (x.size() + y.size() < 2)
        throw InvalidInput("check needs at least two values across the "
                           "two files");
    SampleSummary sx = oracle::summarize(x);
    SampleSummary sy = oracle::summarize(y);
    SampleSummary reference = oracle::concat_summarize(x, y);
    MergeReport merged[2] = {combine_textbook(sx, sy),
                             combine_stable(sx, sy)};

    double ref_var = reference.sample_variance().value();
    bool within[2];
    double errors[2][2];  // [kernel][mean, variance]
    for (int k = 0; k < 2; ++k) {
        const SampleSummary& c = merged[k].combined;
        errors[k][0] = relative_error(c.mean, reference.mean);
        errors[k][1] =
            relative_error(c.sample_variance().value(), ref_var);
        within[k] = c.n == reference.n &&
                    errors[k][0] <= kCheckTolerance &&
                    errors[k][1] <= kCheckTolerance;
    }

    if (cfg.format == OutputFormat::jsonl) {
        out << record_json("oracle", reference, cfg.precision).dump() << "\n";
        for (int k = 0; k < 2; ++k) {
            json j = record_json(to_string(merged[k].kernel),
                                 merged[k].combined, cfg.precision);
            j["rel_err_mean"] = errors[k][0];
            j["rel_err_variance"] = errors[k][1];
            j["within_tolerance"] = within[k];
            out << j.dump() << "\n";
        }
    } else {
        out << std::left << std::setw(10) << "" << std::setw(14) << "n"
            << std::setw(22) << "mean" << std::setw(22) << "variance"
            << std::setw(14) << "err(mean)" << "err(variance)" << "\n";
        auto row = [&](const char* name, const SampleSummary& s,
                       const double* errs) {
            out << std::left << std::setw(10) << name << std::setw(14) << s.n
                << std::setw(22) << format_double(s.mean, cfg.precision)
                << std::setw(22)
                << format_double(s.sample_variance().value(), cfg.precision);
            if (errs)
                out << std::setw(14) << format_double(errs[0], 3)
                    << format_double(errs[1], 3);
            out << "\n";
        };
        row("oracle", reference, nullptr);
        row("textbook", merged[0].combined, errors[0]);
        row("stable", merged[1].combined, errors[1]);
    }

    int selected = cfg.kernel == MergeKernel::textbook ? 0 : 1;
    int other = 1 - selected;
    if (!within[other])
        err << "warning: " << to_string(merged[other].kernel)
            << " kernel exceeds " << format_double(kCheckTolerance, 2)
            << " relative error (not selected, not a failure)\n";
    if (!within[selected]) {
        err << "error: " << to_string(merged[selected].kernel)
            << " kernel exceeds " << format_double(kCheckTolerance, 2)
            << " relative error against the concatenation oracle\n";
        return 3;
    }
    return 0;
}

}  // namespace statmerge::cli
