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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "statmerge/commands.hpp"
#include "statmerge/errors.hpp"
#include "statmerge/records.hpp"
#include "test_util.hpp"

using namespace statmerge;
using namespace statmerge::cli;
using test_util::rel_err;

namespace {

std::vector<StudyRecord> parse_text(const std::string& text,
                                    const RunConfig& cfg = {}) {
    std::istringstream in(text);
    return parse_records(in, cfg);
}

const std::string kFixtureCsv =
    "label,n,mean,sd\n"
    "X,3,2.0,1.0\n"
    "Y,2,5.0,1.4142135623730951\n";

}  // namespace

TEST_CASE("parse_records reads the CSV fixture") {
    auto records = parse_text(kFixtureCsv);
    REQUIRE(records.size() == 2);
    CHECK(records[0].label == "X");
    CHECK(records[0].summary.n == 3);
    CHECK(records[0].summary.mean == 2.0);
    CHECK(records[0].summary.sample_variance().value() == 1.0);
    CHECK(records[1].label == "Y");
    CHECK(rel_err(records[1].summary.sample_variance().value(), 2.0) <=
          1e-15);
}

TEST_CASE("the sd column can be reinterpreted as a variance") {
    RunConfig as_variance;
    as_variance.variance_input = true;
    auto records = parse_text("label,n,mean,sd\nA,3,2.0,1.0\n", as_variance);
    CHECK(records[0].summary.sample_variance().value() == 1.0);

    auto default_records = parse_text("label,n,mean,sd\nA,3,2.0,1.0\n");
    CHECK(default_records[0].summary.sample_variance().value() == 1.0);

    auto wide = parse_text("label,n,mean,sd\nA,3,2.0,2.0\n", as_variance);
    CHECK(wide[0].summary.sample_variance().value() == 2.0);
    auto narrow = parse_text("label,n,mean,sd\nA,3,2.0,2.0\n");
    CHECK(narrow[0].summary.sample_variance().value() == 4.0);
}

TEST_CASE("CSV parse errors carry line and field") {
    CHECK_THROWS_WITH_AS(parse_text("label,n,mean\nA,3,2.0\n"),
                         doctest::Contains("header"), ParseError);
    CHECK_THROWS_WITH_AS(parse_text("label,n,mean,sd\nA,3,2.0\n"),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_text("label,n,mean,sd\nA,three,2.0,1.0\n"),
                         doctest::Contains("'n'"), ParseError);
    CHECK_THROWS_WITH_AS(parse_text("label,n,mean,sd\nA,3,oops,1.0\n"),
                         doctest::Contains("'mean'"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_text("label,n,mean,sd\nA,3,2.0,1.0\nA,2,0.0,1.0\n"),
        doctest::Contains("duplicate"), ParseError);
    CHECK_THROWS_WITH_AS(parse_text("label,n,mean,sd\n,3,2.0,1.0\n"),
                         doctest::Contains("label"), ParseError);
    CHECK_THROWS_AS(parse_text("label,n,mean,sd\nA,3,inf,1.0\n"), ParseError);
    CHECK_THROWS_AS(parse_text("label,n,mean,sd\nA,3,2.0,nan\n"), ParseError);
    CHECK_THROWS_AS(parse_text("label,n,mean,sd\nA,3,2.0,-1.0\n"), ParseError);
    CHECK_THROWS_AS(parse_text("label,n,mean,sd\nA,0,,\n"), ParseError);
    CHECK_THROWS_AS(parse_text("label,n,mean,sd\nA,-3,2.0,1.0\n"), ParseError);
}

TEST_CASE("singleton rows need a blank sd") {
    auto records = parse_text("label,n,mean,sd\nA,1,4.5,\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].summary == SampleSummary::singleton(4.5));

    CHECK_THROWS_WITH_AS(parse_text("label,n,mean,sd\nA,1,4.5,0.0\n"),
                         doctest::Contains("dispersion"), ParseError);
    CHECK_THROWS_WITH_AS(parse_text("label,n,mean,sd\nA,2,4.5,\n"),
                         doctest::Contains("required"), ParseError);
}

TEST_CASE("parse_records reads JSON lines") {
    auto records = parse_text(
        "{\"label\":\"X\",\"n\":3,\"mean\":2.0,\"sd\":1.0}\n"
        "{\"label\":\"S\",\"n\":1,\"mean\":7.0,\"sd\":null}\n"
        "{\"label\":\"V\",\"n\":4,\"mean\":0.5,\"sd\":null,\"variance\":2.25}\n"
        "{\"label\":\"M\",\"n\":4,\"mean\":0.5,\"sd\":9.9,\"variance\":9.9,"
        "\"m2\":6.0,\"extra\":true}\n");
    REQUIRE(records.size() == 4);
    CHECK(records[0].summary.sample_variance().value() == 1.0);
    CHECK(records[1].summary == SampleSummary::singleton(7.0));
    CHECK(records[2].summary.sample_variance().value() == 2.25);
    CHECK(records[3].summary.m2 == 6.0);  // m2 wins over sd/variance

    CHECK_THROWS_WITH_AS(parse_text("{\"label\":\"X\",\"n\":3,\"mean\":"),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_AS(parse_text("{\"label\":\"X\",\"n\":3.5,\"mean\":1.0}"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_text("{\"label\":\"X\",\"n\":1,\"mean\":1.0,\"sd\":2.0}"),
        ParseError);
    CHECK_THROWS_AS(
        parse_text("{\"label\":\"X\",\"n\":1,\"mean\":1.0,\"m2\":3.0}"),
        ParseError);
}

TEST_CASE("blank lines are skipped and empty input yields no records") {
    CHECK(parse_text("").empty());
    CHECK(parse_text("\n   \n").empty());
    auto records = parse_text("label,n,mean,sd\n\nA,3,2.0,1.0\n\n");
    CHECK(records.size() == 1);
}

TEST_CASE("read_raw_values skips comments and validates lines") {
    std::istringstream in("# header\n1.5\n\n  2.5\n# trailing\n-3\n");
    auto values = read_raw_values(in);
    CHECK(values == std::vector<double>{1.5, 2.5, -3.0});

    std::istringstream bad("1.0\nnot-a-number\n");
    CHECK_THROWS_WITH_AS(read_raw_values(bad), doctest::Contains("line 2"),
                         ParseError);
    std::istringstream inf_line("1.0\ninf\n");
    CHECK_THROWS_AS(read_raw_values(inf_line), ParseError);
}

TEST_CASE("cmd_combine renders the fixture") {
    auto records = parse_text(kFixtureCsv);
    RunConfig cfg;

    SUBCASE("table output") {
        std::ostringstream out;
        CHECK(cmd_combine(records, cfg, out) == 0);
        CHECK(out.str().find("stable") != std::string::npos);
        CHECK(out.str().find("3.2") != std::string::npos);
        CHECK(out.str().find("3.7") != std::string::npos);
    }
    SUBCASE("jsonl output re-parses to the library result") {
        cfg.format = OutputFormat::jsonl;
        cfg.precision = 17;
        std::ostringstream out;
        CHECK(cmd_combine(records, cfg, out) == 0);

        std::vector<SampleSummary> parts{records[0].summary,
                                         records[1].summary};
        MergeReport expected = combine_all(parts);
        auto round_trip = parse_text(out.str(), cfg);
        REQUIRE(round_trip.size() == 1);
        CHECK(round_trip[0].label == "combined");
        CHECK(round_trip[0].summary == expected.combined);
    }
    SUBCASE("no records is malformed input") {
        std::ostringstream out;
        std::vector<StudyRecord> none;
        CHECK_THROWS_AS(cmd_combine(none, cfg, out), InvalidInput);
    }
    SUBCASE("a single record is echoed unchanged") {
        std::ostringstream out;
        std::vector<StudyRecord> one{records[0]};
        cfg.format = OutputFormat::jsonl;
        cfg.precision = 17;
        CHECK(cmd_combine(one, cfg, out) == 0);
        auto echoed = parse_text(out.str(), cfg);
        CHECK(echoed[0].summary == records[0].summary);
    }
}

TEST_CASE("cmd_combine is insensitive to record order") {
    std::mt19937_64 rng(530101);
    for (int i = 0; i < 50; ++i) {
        double sign = test_util::random_sign(rng);
        std::vector<StudyRecord> records;
        std::size_t k =
            static_cast<std::size_t>(test_util::uniform_count(rng, 2, 8));
        for (std::size_t j = 0; j < k; ++j)
            records.push_back({"r" + std::to_string(j),
                               test_util::random_summary(rng, sign)});
        std::vector<StudyRecord> reversed(records.rbegin(), records.rend());

        std::vector<SampleSummary> fwd, rev;
        for (const auto& r : records) fwd.push_back(r.summary);
        for (const auto& r : reversed) rev.push_back(r.summary);
        MergeReport a = combine_all(fwd);
        MergeReport b = combine_all(rev);
        CHECK(a.combined.n == b.combined.n);
        CHECK(rel_err(a.combined.mean, b.combined.mean) <= 1e-12);
        CHECK(rel_err(a.combined.sample_variance().value(),
                      b.combined.sample_variance().value()) <= 1e-12);
    }
}

TEST_CASE("cmd_recover renders the missing group") {
    auto records = parse_text(
        "label,n,mean,sd\n"
        "T,5,3.2,1.9235384061671346\n"
        "K,3,2.0,1.0\n");
    RunConfig cfg;
    cfg.format = OutputFormat::jsonl;
    std::ostringstream out;
    CHECK(cmd_recover(records[0], records[1], cfg, out) == 0);
    auto missing = parse_text(out.str(), cfg);
    REQUIRE(missing.size() == 1);
    CHECK(missing[0].label == "missing");
    CHECK(missing[0].summary.n == 2);
    CHECK(rel_err(missing[0].summary.mean, 5.0) <= 1e-9);
    CHECK(rel_err(missing[0].summary.sample_variance().value(), 2.0) <= 1e-9);

    SUBCASE("infeasible sizes propagate the inconsistency") {
        std::ostringstream sink;
        CHECK_THROWS_AS(cmd_recover(records[1], records[0], cfg, sink),
                        InconsistencyError);
    }
}

TEST_CASE("cmd_check compares kernels against the oracle") {
    RunConfig cfg;
    oracle::RawDataset x{1.0, 2.0, 3.0};
    oracle::RawDataset y{4.0, 6.0};

    SUBCASE("benign data passes") {
        std::ostringstream out, err;
        CHECK(cmd_check(x, y, cfg, out, err) == 0);
        CHECK(err.str().empty());
    }
    SUBCASE("constant data gives zero variances") {
        std::ostringstream out, err;
        oracle::RawDataset c1{3.25, 3.25};
        oracle::RawDataset c2{3.25, 3.25};
        CHECK(cmd_check(c1, c2, cfg, out, err) == 0);
    }
    SUBCASE("too few values is malformed") {
        std::ostringstream out, err;
        CHECK_THROWS_AS(cmd_check(oracle::RawDataset{1.0},
                                  oracle::RawDataset{}, cfg, out, err),
                        InvalidInput);
    }
    SUBCASE("shifted data fails the textbook kernel only") {
        std::mt19937_64 rng(530102);
        oracle::RawDataset sx(test_util::dyadic_shifted_values(rng, 32));
        oracle::RawDataset sy(test_util::dyadic_shifted_values(rng, 32));

        std::ostringstream out, err;
        CHECK(cmd_check(sx, sy, cfg, out, err) == 0);
        CHECK(err.str().find("warning") != std::string::npos);
        CHECK(err.str().find("textbook") != std::string::npos);

        cfg.kernel = MergeKernel::textbook;
        std::ostringstream out2, err2;
        CHECK(cmd_check(sx, sy, cfg, out2, err2) == 3);
    }
}

TEST_CASE("exceptions map onto the exit-code contract") {
    std::ostringstream err;
    CHECK(run_with_exit_codes([] { return 0; }, err) == 0);
    CHECK(run_with_exit_codes(
              []() -> int { throw ParseError(3, "n", "bad"); }, err) == 1);
    CHECK(run_with_exit_codes(
              []() -> int { throw InvalidInput("empty"); }, err) == 1);
    CHECK(run_with_exit_codes(
              []() -> int { throw InconsistencyError("impossible"); },
              err) == 2);
    CHECK(run_with_exit_codes([] { return 3; }, err) == 3);
    CHECK(err.str().find("bad") != std::string::npos);
}

TEST_CASE("format_double uses significant digits") {
    CHECK(format_double(3.2, 6) == "3.2");
    CHECK(format_double(1.9235384061671346, 6) == "1.92354");
    CHECK(format_double(1.9235384061671346, 17) == "1.9235384061671346");
    CHECK(std::stod(format_double(0.1 + 0.2, 17)) == 0.1 + 0.2);
}
