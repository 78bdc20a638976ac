#include "qspectra_cli/cli.hpp"
#include "qspectra_cli/spec_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qspectra;
using namespace qspectra::test;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "qspectra");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name)
{
    fs::path dir = fs::temp_directory_path() / "qspectra-cli-test";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_spec(const std::string& name, const std::string& text)
{
    fs::path p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

const char* kBadSpec = R"(name: broken
dimension: 2
q: [2, 2]
alphabet: ["0", "1"]
aperiodic: unknown
rules:
  "0": ["0", "1", "1"]
  "2": ["0", "0", "0", "0"]
)";

}  // namespace

TEST(Cli, DiagnosticsAreCollected)
{
    auto r = run_cli({"analyze", write_spec("bad.yaml", kBadSpec).string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("rule '0': expected 4 cells, found 3"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("rule for unknown letter '2'"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("missing rule for letter '1'"), std::string::npos) << r.err;
}

TEST(Cli, RejectsSmallExpansion)
{
    auto r = run_cli({"analyze", write_spec("q1.yaml", "name: x\ndimension: 1\nq: [1]\nalphabet: [\"0\"]\n"
                                                       "aperiodic: unknown\nrules:\n  \"0\": [\"0\"]\n")
                                     .string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("entries must be at least 2"), std::string::npos) << r.err;
}

TEST(Cli, MissingFile)
{
    auto r = run_cli({"analyze", "/nonexistent/spec.yaml"});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, SpecRoundTrip)
{
    for (const auto& name : kBundled) {
        auto spec = cli::load_spec(spec_path(name));
        std::string text = cli::serialize_spec(spec);
        auto again = cli::parse_spec(text);
        EXPECT_TRUE(spec == again) << name;
        EXPECT_EQ(cli::serialize_spec(again), text) << name;
    }
}

TEST(Cli, Help)
{
    auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    for (const char* cmd : {"analyze", "hull", "fourier", "classify", "freq", "report"})
        EXPECT_NE(r.out.find(cmd), std::string::npos) << cmd;
}

TEST(Cli, FourierRows)
{
    auto r = run_cli({"fourier", spec_path("thue-morse"), "--k", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "k,pair,num,den\n5,00,1,4\n5,01,1,4\n5,10,1,4\n5,11,1,4\n");
}

TEST(Cli, FourierToFile)
{
    fs::path p = scratch("tm.csv");
    auto r = run_cli({"fourier", spec_path("thue-morse"), "--window", "2", "-o", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string csv = slurp(p);
    // Window 2 for q = 2 holds k = -3..3.
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 7 * 4);
}

TEST(Cli, FrequencyOracle)
{
    auto r = run_cli({"freq", spec_path("thue-morse"), "--n", "10", "--k", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("n,k,pair,frequency,exact,deviation", 0), 0u);
    fs::path p = scratch("freq.csv");
    auto s = run_cli({"freq", spec_path("thue-morse"), "--n", "10", "--k", "1", "-o", p.string()});
    ASSERT_EQ(s.code, 0) << s.err;
    auto pos = s.out.find("max deviation ");
    ASSERT_NE(pos, std::string::npos) << s.out;
    double dev = std::stod(s.out.substr(pos + 14));
    EXPECT_LT(dev, 0.01);
}

TEST(Cli, FrequencyNeedsOneShift)
{
    auto r = run_cli({"freq", spec_path("thue-morse"), "--n", "4"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, NumericHullIsIncomplete)
{
    auto r = run_cli({"hull", spec_path("thue-morse"), "--method", "numeric"});
    EXPECT_EQ(r.code, 1) << r.err;
    auto e = run_cli({"hull", spec_path("thue-morse"), "--method", "exact-1d"});
    EXPECT_EQ(e.code, 0) << e.err;
}

TEST(Cli, UnknownMethod)
{
    auto r = run_cli({"hull", spec_path("thue-morse"), "--method", "simplex"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, ReportText)
{
    auto r = run_cli({"report", spec_path("rudin-shapiro")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("σ_max ~ ω_2 + m"), std::string::npos) << r.out;
}

TEST(Cli, DocumentsAreDeterministic)
{
    for (const auto& cmd : {"analyze", "hull", "report"}) {
        fs::path a = scratch(std::string(cmd) + "-a.json"), b = scratch(std::string(cmd) + "-b.json");
        auto ra = run_cli({cmd, spec_path("queffelec-zeta"), "-o", a.string(), "--jobs", "1"});
        auto rb = run_cli({cmd, spec_path("queffelec-zeta"), "-o", b.string(), "--jobs", "4"});
        ASSERT_EQ(ra.code, 0) << ra.err;
        ASSERT_EQ(rb.code, 0) << rb.err;
        EXPECT_EQ(slurp(a), slurp(b)) << cmd;
    }
}

// Report documents of the bundled specs are frozen under tests/golden.
// Set QSPECTRA_UPDATE_GOLDEN=1 to rewrite them.
TEST(Cli, GoldenReports)
{
    const bool update = std::getenv("QSPECTRA_UPDATE_GOLDEN") != nullptr;
    for (const auto& name : kBundled) {
        fs::path out = scratch(name + ".json");
        auto r = run_cli({"report", spec_path(name), "-o", out.string()});
        ASSERT_EQ(r.code, 0) << name << ": " << r.err;
        fs::path golden = fs::path(QSPECTRA_GOLDEN_DIR) / (name + ".json");
        if (update) {
            fs::copy_file(out, golden, fs::copy_options::overwrite_existing);
            continue;
        }
        ASSERT_TRUE(fs::exists(golden)) << golden;
        EXPECT_EQ(slurp(out), slurp(golden)) << name;
    }
}
