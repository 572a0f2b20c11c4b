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

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "statmerge/commands.hpp"

namespace {

using namespace statmerge;
using namespace statmerge::cli;

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    std::map<std::string, MergeKernel> kernels{
        {"stable", MergeKernel::stable}, {"textbook", MergeKernel::textbook}};
    std::map<std::string, OutputFormat> formats{
        {"table", OutputFormat::table}, {"jsonl", OutputFormat::jsonl}};
    cmd->add_option("--kernel", cfg.kernel, "Merge kernel")
        ->transform(CLI::CheckedTransformer(kernels, CLI::ignore_case));
    cmd->add_flag("--variance-input", cfg.variance_input,
                  "Interpret the sd column as a variance");
    cmd->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    cmd->add_option("--precision", cfg.precision,
                    "Significant digits for display (17 = lossless)")
        ->check(CLI::Range(1, 17));
}

std::vector<StudyRecord> load_records(const std::string& path,
                                      const RunConfig& cfg) {
    if (path.empty() || path == "-") return parse_records(std::cin, cfg);
    std::ifstream file(path);
    if (!file)
        throw InvalidInput("cannot open input file '" + path + "'");
    return parse_records(file, cfg);
}

oracle::RawDataset load_raw(const std::string& path) {
    std::ifstream file(path);
    if (!file)
        throw InvalidInput("cannot open data file '" + path + "'");
    return oracle::RawDataset(read_raw_values(file));
}

const StudyRecord& find_record(const std::vector<StudyRecord>& records,
                               const std::string& label, const char* role) {
    for (const StudyRecord& r : records)
        if (r.label == label) return r;
    throw InvalidInput(std::string("no record labeled '") + label +
                       "' for --" + role);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combine (n, mean, sd) study summaries exactly, or recover "
                 "a missing subgroup from the total"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string input_path = "-";
    std::string total_label, known_label;
    std::string x_path, y_path;

    CLI::App* combine_cmd = app.add_subcommand(
        "combine", "Merge all records into one summary");
    combine_cmd->add_option("input", input_path,
                            "CSV or JSONL records ('-' = stdin)");
    add_common_options(combine_cmd, cfg);

    CLI::App* recover_cmd = app.add_subcommand(
        "recover", "Recover the part of a total not covered by a known "
                   "subgroup");
    recover_cmd->add_option("input", input_path,
                            "CSV or JSONL records ('-' = stdin)");
    recover_cmd->add_option("--total", total_label,
                            "Label of the record holding the union");
    recover_cmd->add_option("--known", known_label,
                            "Label of the record holding the known part");
    add_common_options(recover_cmd, cfg);

    CLI::App* check_cmd = app.add_subcommand(
        "check", "Verify both merge kernels against a direct recomputation "
                 "from two raw data files");
    check_cmd->add_option("x_file", x_path, "Raw values, one per line")
        ->required();
    check_cmd->add_option("y_file", y_path, "Raw values, one per line")
        ->required();
    add_common_options(check_cmd, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    return run_with_exit_codes(
        [&]() -> int {
            if (app.got_subcommand(combine_cmd)) {
                auto records = load_records(input_path, cfg);
                return cmd_combine(records, cfg, std::cout);
            }
            if (app.got_subcommand(recover_cmd)) {
                auto records = load_records(input_path, cfg);
                if (total_label.empty() != known_label.empty())
                    throw InvalidInput(
                        "--total and --known must be given together");
                if (total_label.empty()) {
                    if (records.size() != 2)
                        throw InvalidInput(
                            "recover without --total/--known needs exactly "
                            "two records (total first, known second); got " +
                            std::to_string(records.size()));
                    return cmd_recover(records[0], records[1], cfg,
                                       std::cout);
                }
                const StudyRecord& total =
                    find_record(records, total_label, "total");
                const StudyRecord& known =
                    find_record(records, known_label, "known");
                return cmd_recover(total, known, cfg, std::cout);
            }
            return cmd_check(load_raw(x_path), load_raw(y_path), cfg,
                             std::cout, std::cerr);
        },
        std::cerr);
}
