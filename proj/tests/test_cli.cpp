#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace bawcav;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation run(std::vector<std::string> args) {
    args.insert(args.begin(), "bawcav");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// CSV fields; quoted fields may contain commas.
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') quoted = !quoted;
        else if (ch == ',' && !quoted) out.emplace_back();
        else out.back() += ch;
    }
    return out;
}

double field(const std::string& csv, const std::string& column, std::size_t row = 0) {
    const auto ls = lines(csv);
    const auto head = split(ls.at(0));
    const auto cells = split(ls.at(row + 1));
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (head[i] == column) return std::stod(cells.at(i));
    }
    throw std::runtime_error("no column " + column);
}

}  // namespace

TEST(Format, NineSignificantDigits) {
    EXPECT_EQ(cli::format_number(3151491.007953578), "3151491.01");
    EXPECT_EQ(cli::format_number(4.7317334718078281e-20), "4.73173347e-20");
    EXPECT_EQ(cli::format_number(227.0), "227");
    EXPECT_EQ(cli::format_number(0.0), "0");
    EXPECT_EQ(cli::rounded(1.0 / 3.0), 0.333333333);
}

TEST(Ranges, ParsingAndErrors) {
    EXPECT_EQ(cli::parse_range("0.1:5:0.1", "eta-range").size(), 50u);
    EXPECT_EQ(cli::parse_range("1:1:1", "x").size(), 1u);
    EXPECT_THROW(cli::parse_range("5:1:0.1", "x"), ValidationError);
    EXPECT_THROW(cli::parse_range("1:5:0", "x"), ValidationError);
    EXPECT_THROW(cli::parse_range("1:5", "x"), ValidationError);
    EXPECT_THROW(cli::parse_range("a:5:1", "x"), ValidationError);
    EXPECT_EQ(cli::parse_overtones("1,3,5,15"), (std::vector<int>{1, 3, 5, 15}));
    EXPECT_EQ(cli::parse_overtones("1:7:2"), (std::vector<int>{1, 3, 5, 7}));
    EXPECT_THROW(cli::parse_overtones("1,2"), ValidationError);
    EXPECT_THROW(cli::parse_overtones(""), ValidationError);
}

TEST(Characterize, HighOvertoneRow) {
    const Invocation r = run({"characterize", "--n", "227", "--temp-k", "0.02"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(lines(r.out).size(), 2u);
    EXPECT_NEAR(field(r.out, "n_thermal"), 0.22, 0.01);
    EXPECT_EQ(field(r.out, "n"), 227);
}

TEST(Characterize, EvenOvertoneIsRejected) {
    const Invocation r = run({"characterize", "--n", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("overtone must be odd"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(Characterize, MissingMaterialFile) {
    const Invocation r = run({"characterize", "--material", "/nonexistent/quartz.mat"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Characterize, BundledMaterialFileMatchesBuiltIn) {
    const Invocation a = run({"characterize", "--n", "37", "--eta", "10.7"});
    const Invocation b = run({"characterize", "--n", "37", "--eta", "10.7", "--material", BAWCAV_DATA_DIR "/quartz_example.mat"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Characterize, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"characterize", "--temp-k", "0"}).code, 2);
    EXPECT_EQ(run({"characterize", "--eta", "-1"}).code, 2);
    EXPECT_EQ(run({"characterize", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"characterize", "--m", "1"}).code, 2);
    EXPECT_EQ(run({"characterize", "--h0", "0.02"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Characterize, JsonCarriesSchemaVersion) {
    const Invocation r = run({"characterize", "--n", "1,7", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["schema_version"], 1);
    EXPECT_EQ(doc["command"], "characterize");
    ASSERT_EQ(doc["rows"].size(), 2u);
    EXPECT_EQ(doc["rows"][1]["n"], 7);
    const double f = doc["rows"][0]["f_Hz"];
    EXPECT_EQ(f, 3151491.01);
}

TEST(Sweep, RowCountOrderingAndColumns) {
    const Invocation r = run({"sweep", "--n", "1,3,5,15", "--eta-range", "0.1:5:0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 1u + 4u * 50u);
    EXPECT_EQ(ls[0], "n,m,p,eta,chi_inv,xi,f_Hz,m_eff_kg,x_zpf_m,p_zpf,n_thermal");
    for (std::size_t row = 0; row < 200; ++row) {
        const auto cells = split(ls[row + 1]);
        const int n = std::stoi(cells[0]);
        const std::vector<int> expected{1, 3, 5, 15};
        EXPECT_EQ(n, expected[row / 50]);
        if (row % 50 != 0) {
            EXPECT_GT(field(r.out, "xi", row), field(r.out, "xi", row - 1));
            EXPECT_GT(field(r.out, "eta", row), field(r.out, "eta", row - 1));
        }
    }
}

TEST(Sweep, RadiusRange) {
    const Invocation r = run({"sweep", "--n", "1", "--R-range", "0.1:0.5:0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(lines(r.out).size(), 6u);
    // flatter plates trap less
    EXPECT_GT(field(r.out, "eta", 0), field(r.out, "eta", 4));
}

TEST(Sweep, InvalidRanges) {
    EXPECT_EQ(run({"sweep", "--eta-range", "5:1:0.1"}).code, 2);
    EXPECT_EQ(run({"sweep", "--eta-range", "0:1:0.1"}).code, 2);
    EXPECT_EQ(run({"sweep", "--eta-range", "-1:1:0.5"}).code, 2);
    EXPECT_EQ(run({"sweep"}).code, 2);
    EXPECT_EQ(run({"sweep", "--eta-range", "1:2:1", "--R-range", "0.1:0.2:0.1"}).code, 2);
    EXPECT_EQ(run({"sweep", "--R-range", "0.1:0.2:0.1", "--eta", "3"}).code, 2);
}

TEST(Sweep, ByteIdenticalOutput) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = (dir / "bawcav_sweep_a.json").string();
    const auto b = (dir / "bawcav_sweep_b.json").string();
    ASSERT_EQ(run({"sweep", "--n", "1:9:2", "--eta-range", "0.5:3:0.25", "--format", "json", "--out", a}).code, 0);
    ASSERT_EQ(run({"sweep", "--n", "1:9:2", "--eta-range", "0.5:3:0.25", "--format", "json", "--out", b}).code, 0);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Electrode, TableAndInvariance) {
    const Invocation r = run({"electrode", "--n", "1,7,37,227", "--eta", "10.7"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(lines(r.out).size(), 5u);
    EXPECT_NEAR(field(r.out, "C0_F", 0), 2.87239060e-12, 1e-20);
    for (std::size_t row = 1; row < 4; ++row) {
        EXPECT_EQ(field(r.out, "Z_derived_ohm", row), field(r.out, "Z_derived_ohm", 0));
        EXPECT_NEAR(field(r.out, "mu", row), field(r.out, "mu_opt", row), 1e-9);
    }
    EXPECT_EQ(run({"electrode", "--mu-opt", "1.5"}).code, 2);
}

TEST(Membrane, ComparisonTable) {
    const Invocation r = run({"membrane", "--n", "227"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(lines(r.out).size(), 3u);
    EXPECT_NEAR(field(r.out, "f_Hz", 1), 148562.711, 1e-3);
    EXPECT_NEAR(field(r.out, "n_thermal", 0), 0.22, 0.01);
    const Invocation j = run({"membrane", "--format", "json", "--mode-m", "2"});
    ASSERT_EQ(j.code, 0) << j.err;
    const auto doc = nlohmann::json::parse(j.out);
    EXPECT_EQ(doc["rows"][1]["resonator"], "membrane (2,1)");
    EXPECT_FALSE(doc["notes"].empty());
    EXPECT_EQ(run({"membrane", "--h", "0.01"}).code, 2);
}

TEST(ReportCommand, AllCriteriaPass) {
    const Invocation r = run({"paper-report"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("ALL PASS"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL  ["), std::string::npos);
}

TEST(ReportCommand, StiffenedPlateFailsFrequencyChecks) {
    const auto path = (std::filesystem::temp_directory_path() / "bawcav_stiff.mat").string();
    {
        std::ofstream f(path);
        f << "rho = 2643\nc_bar_z = 115.5e9\ne_z = 0\neps_z = 4.06e-11\nM = 262.5e9\nP = 262.5e9\n";
    }
    const Invocation r = run({"paper-report", "--material", path, "--format", "json"});
    std::filesystem::remove(path);
    EXPECT_EQ(r.code, 1);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["schema_version"], 1);
    EXPECT_FALSE(doc["all_pass"].get<bool>());
    for (const auto& c : doc["criteria"]) {
        if (c["criterion"] == 5) {
            EXPECT_FALSE(c["pass"].get<bool>());
        }
        if (c["criterion"] == 3) {
            EXPECT_TRUE(c["pass"].get<bool>());
        }
    }
}

TEST(ReportCommand, JsonSchema) {
    const Invocation r = run({"paper-report", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["schema_version"], 1);
    EXPECT_EQ(doc["command"], "paper-report");
    EXPECT_EQ(doc["criteria"].size(), 10u);
    EXPECT_TRUE(doc["all_pass"].get<bool>());
    for (const auto& row : doc["rows"]) {
        for (const char* key : {"criterion", "title", "check", "measured", "reference", "tolerance", "pass"}) {
            EXPECT_TRUE(row.contains(key)) << key;
        }
    }
}

TEST(Oracle, SuitePasses) {
    const Invocation r = run({"oracle", "--count", "5", "--seed", "7"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("eigen ladder ratio"), std::string::npos);
    EXPECT_EQ(r.out.find(",false,"), std::string::npos);
    EXPECT_EQ(run({"oracle", "--count", "0"}).code, 2);
}
