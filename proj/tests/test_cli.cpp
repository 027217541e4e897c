#include "nlap/cli.hpp"

#include <json.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = nlap::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        if (!line.empty() && line[0] != '#') {
            lines.push_back(line);
        }
    }
    return lines;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) {
        cells.push_back(c);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

TEST(Cli, MultiplierSeriesRow) {
    const Outcome r = run({"multiplier", "--n", "1", "--delta", "0.1", "--beta", "1", "--nu", "10"});
    ASSERT_EQ(r.code, nlap::kExitOk) << r.err;
    const auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "nu_norm,value,method,est_error");
    EXPECT_EQ(split(lines[1])[2], "SERIES");
}

TEST(Cli, ZeroFrequency) {
    const Outcome r = run({"multiplier", "--n", "2", "--delta", "0.3", "--beta", "-inf", "--nu", "0"});
    ASSERT_EQ(r.code, nlap::kExitOk) << r.err;
    EXPECT_EQ(split(data_lines(r.out)[1])[1], "0");
}

TEST(Cli, ValidationErrors) {
    const Outcome excluded = run({"multiplier", "--beta", "5", "--n", "1", "--nu", "1"});
    EXPECT_EQ(excluded.code, nlap::kExitValidation);
    EXPECT_NE(excluded.err.find("n+4"), std::string::npos) << excluded.err;

    const Outcome zero_delta = run({"solve", "--field", "sin1", "--n", "1", "--l", "6.283185307179586",
                                "--N", "64", "--delta", "0", "--beta", "1"});
    EXPECT_EQ(zero_delta.code, nlap::kExitValidation);
    EXPECT_NE(zero_delta.err.find("delta"), std::string::npos);

    EXPECT_EQ(run({"multiplier", "--bogus"}).code, nlap::kExitValidation);
    EXPECT_EQ(run({"sweep", "--outputs", "nope"}).code, nlap::kExitValidation);
    EXPECT_EQ(run({}).code, nlap::kExitValidation);
}

TEST(Cli, LocalSolve) {
    const Outcome r = run({"solve", "--field", "sin1", "--n", "1", "--N", "16", "--local"});
    ASSERT_EQ(r.code, nlap::kExitOk) << r.err;
    const auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 17u);
    EXPECT_EQ(lines[0], "x0,f,u");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        EXPECT_NEAR(std::stod(cells[2]), -std::stod(cells[1]), 1e-14);
    }
}

TEST(Cli, StudyDeltaDefaults) {
    const Outcome r = run({"study-delta"});
    ASSERT_EQ(r.code, nlap::kExitOk) << r.err;
    const auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 5u);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const double slope = std::stod(split(lines[i])[2]);
        EXPECT_GE(slope, 1.8);
        EXPECT_LE(slope, 2.2);
    }
}

TEST(Cli, StudyAssertionFailureExitCode) {
    const Outcome r = run({"study-beta", "--betas", "2.5,2.5"});
    EXPECT_EQ(r.code, nlap::kExitStudyFailed);
    EXPECT_NE(r.out.find("# FAILED:"), std::string::npos);
}

TEST(Cli, SweepRowCount) {
    const Outcome r = run({"sweep", "--n", "1,2", "--beta", "1,-inf", "--no-timestamp"});
    ASSERT_EQ(r.code, nlap::kExitOk) << r.err;
    EXPECT_EQ(data_lines(r.out).size(), 1u + 4 * 1000);
}

TEST(Cli, DeterministicWithoutTimestamp) {
    const std::vector<std::string> args = {"neginf", "--count", "50", "--no-timestamp"};
    const Outcome a = run(args);
    const Outcome b = run(args);
    ASSERT_EQ(a.code, nlap::kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.find("generated:"), std::string::npos);
    EXPECT_NE(run({"neginf", "--count", "5"}).out.find("# generated: "), std::string::npos);
}

TEST(Cli, ConfigFileMatchesFlags) {
    const std::string path = ::testing::TempDir() + "nlap_cli_config.txt";
    {
        std::ofstream cfg(path);
        cfg << "# study\ncommand = study-beta\ndelta = 0.25\nbetas = 2.2,2.8\n";
    }
    const Outcome from_file = run({"--config", path, "--no-timestamp"});
    const Outcome from_flags =
        run({"study-beta", "--delta", "0.25", "--betas", "2.2,2.8", "--no-timestamp"});
    ASSERT_EQ(from_file.code, nlap::kExitOk) << from_file.err;
    EXPECT_EQ(from_file.out, from_flags.out);
    EXPECT_EQ(run({"--config", path + ".missing"}).code, nlap::kExitValidation);
}

TEST(Cli, JsonToFile) {
    const std::string path = ::testing::TempDir() + "nlap_cli_out.json";
    const Outcome r = run({"multiplier", "--n", "3", "--delta", "0.7", "--beta", "5", "--nu", "4",
                       "--format", "json", "--out", path});
    ASSERT_EQ(r.code, nlap::kExitOk) << r.err;
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["columns"]["value"][0], -16.0);
    EXPECT_EQ(j["columns"]["method"][0], "EXACT_LOCAL");
}

TEST(Cli, EveryNumericCellIsFinite) {
    const Outcome r = run({"sweep", "--n", "1,2,3", "--beta", "0,2,3,4.5,-inf", "--count", "40",
                       "--outputs", "multiplier,asymptote_large,asymptote_small,limit_neg_inf"});
    ASSERT_EQ(r.code, nlap::kExitOk) << r.err;
    const auto lines = data_lines(r.out);
    const auto header = split(lines[0]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        ASSERT_EQ(cells.size(), header.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (header[c] == "beta" || header[c] == "method" || cells[c].empty()) {
                continue;
            }
            EXPECT_TRUE(std::isfinite(std::stod(cells[c]))) << lines[i];
        }
    }
}

}  // namespace
