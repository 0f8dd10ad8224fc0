#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace vanet;
using namespace vanet::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kPaper = fs::path(VANET_SCENARIO_DIR) / "paper.scenario";

fs::path scratch_dir()
{
    const auto* info = testing::UnitTest::GetInstance()->current_test_info();
    auto dir = fs::temp_directory_path() / "vanet-tests" /
               (std::string(info->test_suite_name()) + "." + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path write_scenario(const fs::path& dir, const std::string& body)
{
    const auto p = dir / "s.scenario";
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST(Cli, RunWritesBothFormats)
{
    const auto dir = scratch_dir();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run({kPaper, dir, 3, {}}, out, err), kExitOk) << err.str();
    EXPECT_TRUE(fs::exists(dir / "summary.json"));
    EXPECT_TRUE(fs::exists(dir / "summary.csv"));
    EXPECT_NE(out.str().find("scheme=second_proposal seed=3"), std::string::npos);
    const auto summary = import_summary_json(dir / "summary.json");
    EXPECT_EQ(summary.seed, 3u);
    EXPECT_EQ(import_rows_csv(dir / "summary.csv"), summary.rows);
}

TEST(Cli, SeedOverrideChangesOutput)
{
    const auto dir = scratch_dir();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run({kPaper, dir / "a", 1, {}}, out, err), kExitOk);
    ASSERT_EQ(cmd_run({kPaper, dir / "b", 2, {}}, out, err), kExitOk);
    EXPECT_NE(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
}

TEST(Cli, RepeatRunIsByteIdentical)
{
    const auto dir = scratch_dir();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run({kPaper, dir / "a", 11, {}}, out, err), kExitOk);
    ASSERT_EQ(cmd_run({kPaper, dir / "b", 11, {}}, out, err), kExitOk);
    EXPECT_EQ(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
    EXPECT_EQ(slurp(dir / "a" / "summary.csv"), slurp(dir / "b" / "summary.csv"));
}

TEST(Cli, InvalidScenarioExitsOne)
{
    const auto dir = scratch_dir();
    const auto bad = write_scenario(dir, R"({"incentives": {"weights": [0.3, 0.3, 0.3]}})");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run({bad, dir / "out", {}, {}}, out, err), kExitValidation);
    EXPECT_NE(err.str().find("incentives.weights"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "out" / "summary.json"));

    std::ostringstream o2, e2;
    EXPECT_EQ(cmd_validate(bad, o2, e2), kExitValidation);
    EXPECT_EQ(cmd_validate(dir / "missing.scenario", o2, e2), kExitValidation);
}

TEST(Cli, OverrideCanInvalidate)
{
    const auto dir = scratch_dir();
    std::ostringstream out, err;
    // packet_trade needs a destination the paper scenario does not set.
    EXPECT_EQ(cmd_run({kPaper, dir, {}, Scheme::PacketTrade}, out, err), kExitValidation);
    EXPECT_NE(err.str().find("packet.destination"), std::string::npos);
}

TEST(Cli, UnwritableOutputExitsTwo)
{
    const auto dir = scratch_dir();
    std::ofstream(dir / "file") << "x";
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run({kPaper, dir / "file", {}, {}}, out, err), kExitRuntime);
    EXPECT_NE(err.str().find("file"), std::string::npos);
}

TEST(Cli, ValidateReportsHash)
{
    std::ostringstream out, err;
    EXPECT_EQ(cmd_validate(kPaper, out, err), kExitOk);
    const auto hash = scenario_hash(load_scenario(kPaper));
    EXPECT_NE(out.str().find("ok (" + hash + ")"), std::string::npos);
}

TEST(Cli, SingleSeedSweepMatchesRun)
{
    const auto dir = scratch_dir();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run({kPaper, dir / "run", 4, {}}, out, err), kExitOk);
    SweepOptions sw;
    sw.scenario = kPaper;
    sw.out_dir = dir / "sweep";
    sw.seeds = {4};
    ASSERT_EQ(cmd_sweep(sw, out, err), kExitOk) << err.str();
    const auto run_dir = dir / "sweep" / "second_proposal" / "seed-4";
    EXPECT_EQ(slurp(dir / "run" / "summary.json"), slurp(run_dir / "summary.json"));
    EXPECT_EQ(slurp(dir / "run" / "summary.csv"), slurp(run_dir / "summary.csv"));
}

TEST(Cli, SweepCoversEverySeedAndScheme)
{
    const auto dir = scratch_dir();
    SweepOptions sw;
    sw.scenario = kPaper;
    sw.out_dir = dir;
    sw.seeds = parse_seed_list("1-30");
    sw.schemes = {Scheme::SecondProposal, Scheme::PacketPurse};
    sw.formats = {ExportFormat::Json};
    sw.jobs = 4;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_sweep(sw, out, err), kExitOk) << err.str();
    const auto runs = slurp(dir / "sweep_runs.csv");
    EXPECT_EQ(line_count(runs), 1u + 60u);

    // Overspend column: always 0 for proportional sharing.
    std::istringstream lines(runs);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        ASSERT_GE(cols.size(), 8u);
        EXPECT_EQ(cols[2], "ok");
        if (cols[0] == "second_proposal") EXPECT_EQ(cols[7], "0");
    }
    const auto agg = nlohmann::json::parse(slurp(dir / "sweep_aggregate.json"));
    EXPECT_FALSE(agg.empty());
}

TEST(Cli, SweepIsIndependentOfJobCount)
{
    const auto dir = scratch_dir();
    std::ostringstream out, err;
    SweepOptions sw;
    sw.scenario = kPaper;
    sw.seeds = {1, 2, 3, 4, 5};
    sw.out_dir = dir / "j1";
    sw.jobs = 1;
    ASSERT_EQ(cmd_sweep(sw, out, err), kExitOk);
    sw.out_dir = dir / "j8";
    sw.jobs = 8;
    ASSERT_EQ(cmd_sweep(sw, out, err), kExitOk);
    EXPECT_EQ(slurp(dir / "j1" / "sweep_runs.csv"), slurp(dir / "j8" / "sweep_runs.csv"));
    EXPECT_EQ(slurp(dir / "j1" / "sweep_aggregate.json"), slurp(dir / "j8" / "sweep_aggregate.json"));
}

TEST(Cli, SweepRejectsInvalidSchemeUpFront)
{
    const auto dir = scratch_dir();
    SweepOptions sw;
    sw.scenario = kPaper;
    sw.out_dir = dir;
    sw.seeds = {1};
    sw.schemes = {Scheme::SecondProposal, Scheme::PacketTrade};
    std::ostringstream out, err;
    EXPECT_EQ(cmd_sweep(sw, out, err), kExitValidation);
    EXPECT_FALSE(fs::exists(dir / "sweep_runs.csv"));
}

TEST(Cli, ParseSeedList)
{
    EXPECT_EQ(parse_seed_list("1,2,5-8"), (std::vector<std::uint64_t>{1, 2, 5, 6, 7, 8}));
    EXPECT_EQ(parse_seed_list("42"), (std::vector<std::uint64_t>{42}));
    EXPECT_THROW(parse_seed_list("8-5"), std::invalid_argument);
    EXPECT_THROW(parse_seed_list("x"), std::invalid_argument);
    EXPECT_THROW(parse_seed_list(""), std::invalid_argument);
}

TEST(Cli, ParseSchemesAndFormats)
{
    EXPECT_EQ(parse_scheme_list("basic_linear,packet_purse"),
              (std::vector{Scheme::BasicLinear, Scheme::PacketPurse}));
    EXPECT_THROW(parse_scheme_list("fancy"), std::invalid_argument);
    EXPECT_EQ(parse_format("csv"), ExportFormat::Csv);
    EXPECT_EQ(parse_format("json"), ExportFormat::Json);
    EXPECT_THROW(parse_format("xml"), std::invalid_argument);
    EXPECT_EQ(summary_file_name(ExportFormat::Json), "summary.json");
}

TEST(Cli, OutDirFromEnvironment)
{
    ::setenv(kOutDirEnv, "/tmp/vanet-env-out", 1);
    EXPECT_EQ(default_out_dir(), fs::path("/tmp/vanet-env-out"));
    ::unsetenv(kOutDirEnv);
    EXPECT_EQ(default_out_dir(), fs::path("vanetsim-out"));
}

TEST(Cli, OverridesApply)
{
    const auto s = apply_overrides(load_scenario(kPaper), 9, Scheme::BasicLinear);
    EXPECT_EQ(s.seed, 9u);
    EXPECT_EQ(s.scheme, Scheme::BasicLinear);
    const auto same = apply_overrides(load_scenario(kPaper), {}, {});
    EXPECT_EQ(same.seed, 1u);
}
