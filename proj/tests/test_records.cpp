#include "dyadic/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace
{
using dyadic::CesaroOrder;
using dyadic::ExperimentRecord;

std::string csv(const std::vector<ExperimentRecord> &rows, bool timing = false)
{
	std::ostringstream os;
	dyadic::write_csv(os, rows, timing);
	return os.str();
}

std::vector<ExperimentRecord> sample_rows()
{
	ExperimentRecord a;
	a.experiment = "demo";
	a.param("n", 3).param("label", "plain");
	a.value = 0.5;
	a.put("x", 1.25);
	ExperimentRecord b;
	b.experiment = "demo";
	b.param("label", "has,comma \"quoted\"").param("extra", "e");
	b.value = 2.0;
	b.put("y", std::nan("")).put("x", -3.0);
	b.wall_time = 0.125;
	return {a, b};
}

TEST(Records, Lookup)
{
	const auto rows = sample_rows();
	EXPECT_EQ(*rows[0].find_param("n"), "3");
	EXPECT_FALSE(rows[0].find_param("extra"));
	EXPECT_EQ(*rows[1].find_derived("x"), -3.0);
	EXPECT_FALSE(rows[0].find_derived("y"));
}

TEST(Records, CsvHeaderIsTheUnionInFirstSeenOrder)
{
	EXPECT_EQ(csv(sample_rows()), "experiment,n,label,extra,value,x,y\n"
	                              "demo,3,plain,,0.5,1.25,\n"
	                              "demo,,\"has,comma \"\"quoted\"\"\",e,2,-3,nan\n");
}

TEST(Records, WallTimeOnlyWhenRequested)
{
	const std::string with = csv(sample_rows(), true);
	EXPECT_EQ(with.substr(0, with.find('\n')), "experiment,n,label,extra,value,x,y,wall_time");
	EXPECT_NE(with.find(",0.125\n"), std::string::npos);
	EXPECT_EQ(csv(sample_rows()).find("wall_time"), std::string::npos);
}

TEST(Records, JsonLines)
{
	std::ostringstream os;
	dyadic::write_records(os, sample_rows(), dyadic::OutputFormat::JsonLines);
	std::istringstream in(os.str());
	std::string line;
	std::vector<nlohmann::json> rows;
	while (std::getline(in, line))
		rows.push_back(nlohmann::json::parse(line));
	ASSERT_EQ(rows.size(), 2u);
	EXPECT_EQ(rows[0]["params"]["n"], "3");
	EXPECT_EQ(rows[1]["params"]["label"], "has,comma \"quoted\"");
	EXPECT_EQ(rows[1]["value"], 2.0);
	EXPECT_TRUE(rows[1]["derived"]["y"].is_null());
	EXPECT_FALSE(rows[1].contains("wall_time"));
	EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
	          R"({"experiment":"demo","params":{"n":"3","label":"plain"},"value":0.5,"derived":{"x":1.25}})");
}

TEST(Records, EmptyTableHasHeaderOnly)
{
	EXPECT_EQ(csv({}), "experiment,value\n");
}

// Every record carries the parameters needed to rerun it.
TEST(Records, ExperimentsCarryTheirParameters)
{
	const std::vector<int> n1{3};
	for (const auto &r : dyadic::ratio_experiment(n1, dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0),
	                                              {CesaroOrder(0.5), CesaroOrder(0.5)}))
		for (const char *k : {"n1", "alpha", "cone", "p0"})
			EXPECT_TRUE(r.find_param(k)) << k;
	for (const auto &r : dyadic::kernel_survey_experiment(dyadic::SystemKind::Paley, CesaroOrder(0.3), 8, 4))
		for (const char *k : {"system", "alpha", "rank"})
			EXPECT_TRUE(r.find_param(k)) << k;
	const std::vector<int> n{3};
	for (const auto &r : dyadic::goginava_experiment(n, CesaroOrder(0.5), dyadic::GoginavaVariant::Lemma))
		for (const char *k : {"n", "alpha", "variant"})
			EXPECT_TRUE(r.find_param(k)) << k;
}

TEST(Determinism, CsvIndependentOfThreadCount)
{
	const auto cone = dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0);
	const std::vector<int> n1{3, 5, 7};
	const std::vector<int> n{3, 6, 8};
	auto run = [&](int threads)
	{
		auto rows = dyadic::ratio_experiment(n1, cone, {CesaroOrder(0.5), CesaroOrder(0.5)}, {.threads = threads});
		for (auto &r : dyadic::goginava_experiment(n, CesaroOrder(0.7), dyadic::GoginavaVariant::Both, threads))
			rows.push_back(std::move(r));
		for (auto &r : dyadic::kernel_survey_experiment(dyadic::SystemKind::Kaczmarz, CesaroOrder(0.5), 300, 9, threads))
			rows.push_back(std::move(r));
		for (auto &r : dyadic::systems_check_experiment(6, threads))
			rows.push_back(std::move(r));
		return csv(rows);
	};
	const std::string one = run(1);
	EXPECT_EQ(one, run(1));
	EXPECT_EQ(one, run(3));
	EXPECT_EQ(one, run(8));
}
}
