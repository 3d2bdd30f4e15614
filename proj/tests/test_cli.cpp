#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace
{
namespace fs = std::filesystem;

class Cli : public ::testing::Test
{
protected:
	void SetUp() override
	{
		dir = fs::temp_directory_path() /
		      ("dyadiclab-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
		fs::remove_all(dir);
		fs::create_directories(dir);
	}

	void TearDown() override { fs::remove_all(dir); }

	int run(std::vector<std::string> args)
	{
		args.insert(args.begin(), "dyadiclab");
		std::vector<const char *> argv;
		for (const auto &a : args)
			argv.push_back(a.c_str());
		out.str("");
		err.str("");
		return dyadiclab::run(static_cast<int>(argv.size()), argv.data(), out, err);
	}

	std::string path(const std::string &name) const { return (dir / name).string(); }

	static std::string slurp(const std::string &p)
	{
		std::ifstream in(p, std::ios::binary);
		std::ostringstream s;
		s << in.rdbuf();
		return s.str();
	}

	static void write(const std::string &p, const std::string &text) { std::ofstream(p, std::ios::binary) << text; }

	fs::path dir;
	std::ostringstream out, err;
};

TEST(ParseRange, Forms)
{
	EXPECT_EQ(dyadiclab::parse_range("4..7"), (std::vector<std::int64_t>{4, 5, 6, 7}));
	EXPECT_EQ(dyadiclab::parse_range("6..12:2"), (std::vector<std::int64_t>{6, 8, 10, 12}));
	EXPECT_EQ(dyadiclab::parse_range("1, 3..4,9"), (std::vector<std::int64_t>{1, 3, 4, 9}));
	EXPECT_EQ(dyadiclab::parse_range("5"), (std::vector<std::int64_t>{5}));
	for (const char *bad : {"", "4..", "7..4", "1..4:0", "a", "1,,2", "2.5"})
		EXPECT_THROW(dyadiclab::parse_range(bad), dyadiclab::ConfigError) << bad;
	EXPECT_EQ(dyadiclab::parse_reals("0.5, 1"), (std::vector<double>{0.5, 1.0}));
	EXPECT_THROW(dyadiclab::parse_reals("0.5,x"), dyadiclab::ConfigError);
	EXPECT_THROW(dyadiclab::parse_reals("nan"), dyadiclab::ConfigError);
}

TEST_F(Cli, HelpListsEveryFlag)
{
	EXPECT_EQ(run({"--help"}), 0);
	const std::string help = out.str();
	for (const char *flag : {"--config", "--output", "--format", "--threads", "--timing", "--rank", "--transform-rank",
	                         "--unit-rank", "--samples", "--seed", "--system", "--alpha", "--max-n", "--n", "--variant",
	                         "--cone", "--beta", "--n1", "--oracle-max-n1", "--function", "--support-rank", "--index",
	                         "--grid-rank", "--c", "--x", "--j"})
		EXPECT_NE(help.find(flag), std::string::npos) << flag;
	for (const char *cmd : {"systems-check", "kernel-survey", "goginava", "counterexample", "converge", "sneider", "contrast"})
		EXPECT_NE(help.find(cmd), std::string::npos) << cmd;
	EXPECT_EQ(run({"goginava", "--help"}), 0);
	EXPECT_NE(out.str().find("--variant"), std::string::npos);
}

TEST_F(Cli, UsageErrors)
{
	EXPECT_EQ(run({}), dyadiclab::kUsage);
	EXPECT_EQ(run({"frobnicate"}), dyadiclab::kUsage);
	EXPECT_EQ(run({"goginava", "--bogus", "1"}), dyadiclab::kUsage);
	EXPECT_EQ(run({"goginava", "--threads", "two"}), dyadiclab::kUsage);
}

TEST_F(Cli, ConfigErrorsFailBeforeComputing)
{
	const std::string o = path("x.csv");
	EXPECT_EQ(run({"goginava", "--alpha", "1.5", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"goginava", "--variant", "middle", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"goginava", "--n", "0..3", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"counterexample", "--alpha", "1,0.5", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"counterexample", "--alpha", "0.5", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"counterexample", "--cone", path("missing.json"), "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"converge", "--function", "wave", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"contrast", "--x", "1,2", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"contrast", "--j", "3,5", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"systems-check", "--rank", "15", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"converge", "--grid-rank", "12", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"--format", "xml", "contrast", "-o", o}), dyadiclab::kConfig);
	EXPECT_EQ(run({"--config", path("missing.ini"), "contrast", "-o", o}), dyadiclab::kConfig);
	EXPECT_NE(err.str().find("config error"), std::string::npos);
	EXPECT_FALSE(fs::exists(o));
}

TEST_F(Cli, UnwritableOutput)
{
	EXPECT_EQ(run({"contrast", "-o", path("no/such/dir/out.csv")}), dyadiclab::kOutput);
}

TEST_F(Cli, ContractViolationAtRunTime)
{
	// a steep tabulated γ passes parsing but overflows the L^N index
	write(path("steep.json"), R"({"d": 2, "dims": [{"gamma": "table", "table": [[1, 1], [2, 1e18]], "zeta": 2, "c_lo": 2, "c_hi": 1e19}]})");
	EXPECT_EQ(run({"counterexample", "--cone", path("steep.json"), "--n1", "6", "-o", path("c.csv")}), dyadiclab::kContract);
	EXPECT_NE(err.str().find("contract violation"), std::string::npos);
}

TEST_F(Cli, WritesRecordsSummaryAndSidecar)
{
	const std::string o = path("contrast.csv");
	ASSERT_EQ(run({"contrast", "--j", "2..5", "-o", o}), 0) << err.str();
	const std::string csv = slurp(o);
	EXPECT_EQ(csv.substr(0, csv.find('\n')),
	          "experiment,x,j,N,value,paley,kaczmarz_increasing,paley_decreasing,paley_final_abs");
	EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
	EXPECT_NE(out.str().find("contrast: 4 records"), std::string::npos);
	const std::string sidecar = slurp(o + ".config.ini");
	EXPECT_NE(sidecar.find("[contrast]"), std::string::npos);
	EXPECT_NE(sidecar.find("j=\"2..5\""), std::string::npos);
	EXPECT_EQ(sidecar.find("[goginava]"), std::string::npos);
}

TEST_F(Cli, JsonLinesAndTiming)
{
	const std::string o = path("g.jsonl");
	ASSERT_EQ(run({"--format", "jsonl", "--timing", "goginava", "--n", "2..3", "-o", o}), 0) << err.str();
	const std::string text = slurp(o);
	EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
	EXPECT_NE(text.find("\"wall_time\""), std::string::npos);
	EXPECT_EQ(text.front(), '{');
}

TEST_F(Cli, SidecarReproducesTheRun)
{
	const std::string o = path("r.csv");
	ASSERT_EQ(run({"--threads", "3", "counterexample", "--n1", "3..5", "--alpha", "0.3,0.6", "--cone", "power:1.5",
	               "--beta", "2", "-o", o}),
	          0)
	    << err.str();
	const std::string first = slurp(o);
	const std::string again = path("again.csv");
	ASSERT_EQ(run({"--config", o + ".config.ini", "-o", again}), 0) << err.str();
	EXPECT_EQ(slurp(again), first);
	ASSERT_EQ(run({"--config", o + ".config.ini", "--threads", "1"}), 0) << err.str();
	EXPECT_EQ(slurp(o), first);
}

TEST_F(Cli, FlagsOverrideConfig)
{
	write(path("run.ini"), "output=\"" + path("from-config.csv") + "\"\n[goginava]\nn=\"2..3\"\nalpha=\"1\"\n");
	ASSERT_EQ(run({"--config", path("run.ini")}), 0) << err.str();
	std::string csv = slurp(path("from-config.csv"));
	EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
	EXPECT_NE(csv.find("goginava,3,1,"), std::string::npos);

	ASSERT_EQ(run({"--config", path("run.ini"), "goginava", "--n", "4"}), 0) << err.str();
	csv = slurp(path("from-config.csv"));
	EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
	EXPECT_NE(csv.find("goginava,4,1,"), std::string::npos);
}

TEST_F(Cli, EveryCommandRunsAtSmallSize)
{
	const std::vector<std::vector<std::string>> commands{
	    {"systems-check", "--rank", "5", "--transform-rank", "8", "--unit-rank", "6", "--samples", "20"},
	    {"kernel-survey", "--system", "both", "--alpha", "0.5,1", "--max-n", "64"},
	    {"goginava", "--n", "2..4"},
	    {"counterexample", "--n1", "2..4"},
	    {"converge", "--grid-rank", "5", "--n1", "1..5", "--function", "character", "--index", "3"},
	    {"sneider", "--rank", "6"},
	    {"contrast", "--x", "0,1", "--j", "1..6"}};
	for (auto args : commands)
	{
		const std::string o = path(args.front() + ".csv");
		args.push_back("-o");
		args.push_back(o);
		EXPECT_EQ(run(args), 0) << args.front() << ": " << err.str();
		EXPECT_TRUE(fs::exists(o));
		EXPECT_TRUE(fs::exists(o + ".config.ini"));
	}
}
}
