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

#include "statmerge/records.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string_view>
#include <unordered_set>

#include <json.hpp>

#include "statmerge/errors.hpp"

namespace statmerge::cli {

namespace {

using nlohmann::json;

struct Line {
    std::size_t number;
    std::string text;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<Line> significant_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!trim(raw).empty()) lines.push_back({number, raw});
    }
    return lines;
}

double parse_double(std::string_view text, std::size_t line,
                    const char* field) {
    text = trim(text);
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(line, field,
                         "cannot parse '" + std::string(text) +
                             "' as a number");
    if (!std::isfinite(value))
        throw ParseError(line, field, "value must be finite");
    return value;
}

std::int64_t parse_count(std::string_view text, std::size_t line,
                         const char* field) {
    text = trim(text);
    std::int64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(line, field,
                         "cannot parse '" + std::string(text) +
                             "' as an integer count");
    return value;
}

// Shared by the CSV and JSONL paths once label/n/mean and the dispersion
// value (already in the requested unit) are known.
SampleSummary build_summary(std::size_t line, std::int64_t n, double mean,
                            bool has_dispersion, double dispersion,
                            bool dispersion_is_variance) {
    if (n < 1)
        throw ParseError(line, "n", "record must cover at least one value");
    if (n == 1) {
        if (has_dispersion)
            throw ParseError(line, "sd",
                             "a single value has no dispersion; leave the "
                             "field blank for n = 1");
        return SampleSummary::singleton(mean);
    }
    if (!has_dispersion)
        throw ParseError(line, "sd", "required for n >= 2");
    if (dispersion < 0.0)
        throw ParseError(line, "sd", "must be non-negative");
    double variance =
        dispersion_is_variance ? dispersion : dispersion * dispersion;
    return from_stats(n, mean, variance);
}

StudyRecord parse_csv_row(const Line& line, const RunConfig& cfg) {
    std::vector<std::string_view> fields;
    std::string_view rest = line.text;
    while (true) {
        std::size_t comma = rest.find(',');
        fields.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 4)
        throw ParseError(line.number, "row",
                         "expected 4 comma-separated fields (label,n,mean,"
                         "sd), got " + std::to_string(fields.size()));

    std::string label(fields[0]);
    if (label.empty())
        throw ParseError(line.number, "label", "must be non-empty");
    std::int64_t n = parse_count(fields[1], line.number, "n");
    if (fields[2].empty())
        throw ParseError(line.number, "mean", "must be present");
    double mean = parse_double(fields[2], line.number, "mean");
    bool has_sd = !fields[3].empty();
    double sd = has_sd ? parse_double(fields[3], line.number, "sd") : 0.0;
    return {std::move(label), build_summary(line.number, n, mean, has_sd, sd,
                                            cfg.variance_input)};
}

double json_number(const json& j, const char* field, std::size_t line) {
    const json& v = j.at(field);
    if (!v.is_number())
        throw ParseError(line, field, "must be a number");
    double value = v.get<double>();
    if (!std::isfinite(value))
        throw ParseError(line, field, "value must be finite");
    return value;
}

StudyRecord parse_jsonl_row(const Line& line, const RunConfig& cfg) {
    json j;
    try {
        j = json::parse(line.text);
    } catch (const json::parse_error& e) {
        throw ParseError(line.number, "json", e.what());
    }
    if (!j.is_object())
        throw ParseError(line.number, "json", "expected an object per line");
    if (!j.contains("label") || !j["label"].is_string())
        throw ParseError(line.number, "label", "must be a string");
    std::string label = j["label"].get<std::string>();
    if (label.empty())
        throw ParseError(line.number, "label", "must be non-empty");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ParseError(line.number, "n", "must be an integer");
    std::int64_t n = j["n"].get<std::int64_t>();
    if (!j.contains("mean"))
        throw ParseError(line.number, "mean", "must be present");
    double mean = json_number(j, "mean", line.number);

    auto present = [&](const char* field) {
        return j.contains(field) && !j[field].is_null();
    };

    // Prefer the exact internal value, then the variance, then sd.
    if (present("m2")) {
        double m2 = json_number(j, "m2", line.number);
        if (n == 1 && m2 == 0.0) return {label, SampleSummary::singleton(mean)};
        if (n < 2)
            throw ParseError(line.number, "m2",
                             "only meaningful for n >= 2 (or 0 for n = 1)");
        if (m2 < 0.0)
            throw ParseError(line.number, "m2", "must be non-negative");
        return {label, SampleSummary{n, mean, m2}};
    }
    if (present("variance")) {
        double variance = json_number(j, "variance", line.number);
        return {label,
                build_summary(line.number, n, mean, true, variance, true)};
    }
    bool has_sd = present("sd");
    double sd = has_sd ? json_number(j, "sd", line.number) : 0.0;
    return {label, build_summary(line.number, n, mean, has_sd, sd,
                                 cfg.variance_input)};
}

}  // namespace

std::vector<StudyRecord> parse_records(std::istream& in,
                                       const RunConfig& cfg) {
    std::vector<Line> lines = significant_lines(in);
    std::vector<StudyRecord> records;
    if (lines.empty()) return records;

    bool is_jsonl = trim(lines.front().text).front() == '{';
    std::size_t first_row = 0;
    if (!is_jsonl) {
        std::string_view header = trim(lines.front().text);
        std::string collapsed;
        for (char c : header)
            if (!std::isspace(static_cast<unsigned char>(c))) collapsed += c;
        if (collapsed != "label,n,mean,sd")
            throw ParseError(lines.front().number, "header",
                             "expected 'label,n,mean,sd', got '" +
                                 std::string(header) + "'");
        first_row = 1;
    }

    std::unordered_set<std::string> seen;
    for (std::size_t i = first_row; i < lines.size(); ++i) {
        StudyRecord record = is_jsonl ? parse_jsonl_row(lines[i], cfg)
                                      : parse_csv_row(lines[i], cfg);
        if (!seen.insert(record.label).second)
            throw ParseError(lines[i].number, "label",
                             "duplicate label '" + record.label + "'");
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<double> read_raw_values(std::istream& in) {
    std::vector<double> values;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::string_view text = trim(raw);
        if (text.empty() || text.front() == '#') continue;
        values.push_back(parse_double(text, number, "value"));
    }
    return values;
}

std::string format_double(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    return buffer;
}

}  // namespace statmerge::cli
