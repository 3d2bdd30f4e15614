#include "dyadic/experiments.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace
{
using dyadic::CesaroOrder;
using dyadic::GroupPoint;
using dyadic::Index;
using dyadic::SampledFunction;
using dyadic::SystemKind;

dyadic::CounterexampleSpec spec_for(int n1, double a1 = 0.5, double a2 = 0.5,
                                    const dyadic::CRFSpec &gamma = dyadic::crf::identity(), double beta = 1.0)
{
	return {n1, dyadic::ConeSpec::uniform(2, gamma, beta), {CesaroOrder(a1), CesaroOrder(a2)}};
}

std::vector<double> values(const std::vector<dyadic::ExperimentRecord> &rows)
{
	std::vector<double> v;
	for (const auto &r : rows)
		v.push_back(r.value);
	return v;
}

TEST(LeastSquares, ExactLine)
{
	const std::vector<double> x{1, 2, 4, 7}, y{5, 7, 11, 17};
	const auto fit = dyadic::least_squares(x, y);
	EXPECT_NEAR(fit.slope, 2.0, 1e-14);
	EXPECT_NEAR(fit.intercept, 3.0, 1e-14);
	const std::vector<double> same{1, 1};
	EXPECT_THROW(dyadic::least_squares(same, same), dyadic::ContractViolation);
	EXPECT_EQ(dyadic::upper_half_start(2), 0u);
	EXPECT_EQ(dyadic::upper_half_start(3), 1u);
	EXPECT_EQ(dyadic::upper_half_start(4), 2u);
	EXPECT_EQ(dyadic::upper_half_start(9), 4u);
}

TEST(Counterexample, SpecValidation)
{
	const auto s = spec_for(3);
	EXPECT_DOUBLE_EQ(s.p0(), 2.0 / 3.0);
	EXPECT_DOUBLE_EQ(spec_for(3, 0.3, 1.0).p0(), 1.0 / 1.3);
	EXPECT_THROW(spec_for(3, 1.0, 0.5).validate(), dyadic::ContractViolation);
	EXPECT_THROW(spec_for(0).validate(), dyadic::ContractViolation);
	auto wrong = s;
	wrong.alpha.push_back(CesaroOrder(1.0));
	EXPECT_THROW(wrong.validate(), dyadic::ContractViolation);
	EXPECT_EQ(dyadic::counterexample_ranks(spec_for(3, 0.5, 0.5, dyadic::crf::power(2.0))), (std::vector<int>{4, 7}));
	const std::vector<int> low{3, 3};
	EXPECT_THROW(dyadic::build_counterexample(s, low), dyadic::ContractViolation);
}

TEST(Counterexample, KaczmarzSpectrumAtN1One)
{
	const auto spec = spec_for(1);
	const auto f = dyadic::build_counterexample(spec, dyadic::counterexample_ranks(spec));
	ASSERT_EQ(f.ranks(), (std::vector<int>{2, 2}));
	const auto c = dyadic::fourier_coeffs(f, SystemKind::Kaczmarz);
	for (Index k1 = 0; k1 < 4; ++k1)
		for (Index k2 = 0; k2 < 4; ++k2)
			EXPECT_EQ(c.coeffs(k1 * 4 + k2), ((k1 == 2 || k1 == 3) && k2 == 1) ? 1.0 : 0.0) << k1 << "," << k2;
}

// Kaczmarz coefficients equal 1 on [2^{n_1}, 2^{n_1+1}) x {2^{n_2}-1} and vanish elsewhere
TEST(Counterexample, KaczmarzSpectrumIsTheIndexBox)
{
	for (int n1 : {2, 3, 4})
		for (const auto &gamma : {dyadic::crf::identity(), dyadic::crf::power(1.5)})
		{
			const auto spec = spec_for(n1, 0.5, 0.5, gamma);
			const auto ranks = dyadic::counterexample_ranks(spec);
			const auto nbar = spec.nbar();
			const auto c = dyadic::fourier_coeffs(dyadic::build_counterexample(spec, ranks), SystemKind::Kaczmarz);
			const Index e2 = Index{1} << ranks[1];
			for (Index k1 = 0; k1 < (Index{1} << ranks[0]); ++k1)
				for (Index k2 = 0; k2 < e2; ++k2)
				{
					const bool on = (k1 >> n1) == 1 && k2 == (Index{1} << nbar[1]) - 1;
					ASSERT_NEAR(c.coeffs(k1 * e2 + k2), on ? 1.0 : 0.0, 1e-13);
				}
		}
}

TEST(Counterexample, ReducedProfileMatchesTwoDimensionalMeans)
{
	for (int n1 : {1, 2, 3, 4})
		for (const auto &spec : {spec_for(n1), spec_for(n1, 0.3, 0.9), spec_for(n1, 0.5, 1.0, dyadic::crf::power(1.5), 2.0)})
		{
			const auto ranks = dyadic::counterexample_ranks(spec);
			const auto f = dyadic::build_counterexample(spec, ranks);
			const auto family = dyadic::ln_family(spec);
			ASSERT_EQ(family.size(), (std::size_t{1} << n1) - 1);
			const Index e2 = Index{1} << ranks[1];
			for (std::size_t i = 0; i < family.size(); ++i)
			{
				const auto sigma = dyadic::cesaro_mean(f, family[i]);
				const auto profile = dyadic::reduced_profile(spec, static_cast<Index>(i + 1));
				ASSERT_EQ(profile.size(), Index{1} << ranks[0]);
				for (Index x1 = 0; x1 < profile.size(); ++x1)
					ASSERT_NEAR(std::abs(sigma.values()(x1 * e2)), profile.values()(x1), 1e-12)
					    << "n1=" << n1 << " N=" << i + 1 << " x1=" << x1;
			}
		}
}

TEST(Counterexample, ReducedRatioMatchesFullPath)
{
	for (int n1 = 1; n1 <= 5; ++n1)
		for (const auto &spec : {spec_for(n1), spec_for(n1, 0.3, 0.7), spec_for(n1, 1.0, 1.0, dyadic::crf::x_log(), 2.0)})
		{
			const auto reduced = dyadic::counterexample_ratio_reduced(spec, 2);
			const auto full = dyadic::counterexample_ratio_full(spec, 1);
			EXPECT_NEAR(reduced.ratio, full.ratio, 1e-10) << "n1=" << n1;
			EXPECT_NEAR(full.hardy_norm, std::pow(2.0, (1.0 - 1.0 / spec.p0()) * n1), 1e-12);
			EXPECT_EQ(reduced.hardy_norm, std::pow(2.0, (1.0 - 1.0 / spec.p0()) * n1));
			EXPECT_GT(reduced.ratio, 0.0);
		}
}

TEST(Counterexample, RatioExperimentRows)
{
	const std::vector<int> n1s{3, 4, 6};
	const auto rows = dyadic::ratio_experiment(n1s, dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0),
	                                           {CesaroOrder(0.5), CesaroOrder(0.5)}, {.threads = 2, .oracle_max_n1 = 5});
	ASSERT_EQ(rows.size(), 3u);
	EXPECT_EQ(*rows[0].find_param("n1"), "3");
	EXPECT_EQ(*rows[0].find_param("cone"), "identity/beta=1");
	EXPECT_LE(*rows[0].find_derived("oracle_abs_diff"), 1e-10);
	EXPECT_FALSE(rows[1].find_derived("oracle_abs_diff"));
	for (const auto &r : rows)
	{
		EXPECT_TRUE(std::isfinite(r.value));
		EXPECT_GT(r.value, 0.0);
		EXPECT_EQ(*r.find_derived("slope"), *rows[0].find_derived("slope"));
		EXPECT_DOUBLE_EQ(r.value, *r.find_derived("maximal_norm") / *r.find_derived("hardy_norm"));
	}
	EXPECT_LT(rows[0].value, rows[2].value);
}

// 2/log 2 = 4/log 4, so this fit has no spread in its abscissae
TEST(Counterexample, DegenerateFitIsNaN)
{
	const std::vector<int> n1s{4, 2};
	const auto rows = dyadic::ratio_experiment(n1s, dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0),
	                                           {CesaroOrder(0.5), CesaroOrder(0.5)});
	ASSERT_EQ(rows.size(), 2u);
	EXPECT_TRUE(std::isnan(*rows[0].find_derived("slope")));
	const std::vector<int> wider{2, 3, 4};
	EXPECT_TRUE(std::isfinite(*dyadic::ratio_experiment(wider, dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0),
	                                                    {CesaroOrder(0.5), CesaroOrder(0.5)})[0]
	                               .find_derived("slope")));
}

TEST(Goginava, NOne)
{
	for (double a : {0.3, 0.5, 1.0})
	{
		const auto v = dyadic::goginava_integral(1, CesaroOrder(a));
		EXPECT_NEAR(v.lemma, std::pow(1.0 / (1.0 + a), 1.0 / (1.0 + a)), 1e-15);
		// A_1^α |K_1| = 1
		EXPECT_NEAR(v.proof, 1.0, 1e-15);
	}
}

TEST(Goginava, BruteForceAtSmallRanks)
{
	for (double a : {0.5, 1.0})
		for (int n : {2, 3, 5})
		{
			double lemma = 0.0, proof = 0.0;
			for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
			{
				double l = 0.0, p = 0.0;
				for (std::int64_t N = 1; N < (std::int64_t{1} << n); ++N)
				{
					const double k = std::abs(oracle::cesaro_kernel(SystemKind::Paley, N, a, x));
					l = std::max(l, std::pow(oracle::cesaro(N - 1, a) * k, 1.0 / (1.0 + a)));
					p = std::max(p, oracle::cesaro(N, a) * k);
				}
				lemma += l;
				proof += p;
			}
			const double cells = std::ldexp(1.0, n);
			const auto v = dyadic::goginava_integral(n, CesaroOrder(a), 3);
			EXPECT_NEAR(v.lemma, lemma / cells, 1e-12) << "n=" << n << " a=" << a;
			EXPECT_NEAR(v.proof, std::pow(proof / cells, 1.0 + a), 1e-11) << "n=" << n << " a=" << a;
		}
}

TEST(Goginava, LemmaVariantNondecreasing)
{
	for (double a : {0.5, 1.0})
	{
		double previous = 0.0;
		for (int n = 1; n <= 10; ++n)
		{
			const double v = dyadic::goginava_integral(n, CesaroOrder(a)).lemma;
			EXPECT_GE(v, previous) << "n=" << n;
			previous = v;
		}
	}
}

TEST(Goginava, ExperimentColumns)
{
	const std::vector<int> ns{2, 4};
	const auto both = dyadic::goginava_experiment(ns, CesaroOrder(1.0), dyadic::GoginavaVariant::Both);
	ASSERT_EQ(both.size(), 2u);
	const auto v = dyadic::goginava_integral(4, CesaroOrder(1.0));
	EXPECT_EQ(both[1].value, v.lemma);
	EXPECT_EQ(*both[1].find_derived("proof"), v.proof);
	EXPECT_DOUBLE_EQ(*both[1].find_derived("lemma_scaled"), v.lemma * std::log(6.0) / 4.0);
	const auto proof = dyadic::goginava_experiment(ns, CesaroOrder(1.0), dyadic::GoginavaVariant::Proof);
	EXPECT_EQ(*proof[1].find_param("variant"), "proof");
	EXPECT_EQ(proof[1].value, v.proof);
}

TEST(KernelSurvey, RowsAndCompleteBlocks)
{
	const auto rows = dyadic::kernel_survey_experiment(SystemKind::Kaczmarz, CesaroOrder(0.5), 64, 7, 2);
	ASSERT_EQ(rows.size(), 64u + 7u);
	for (Index N = 1; N <= 64; ++N)
	{
		const auto &r = rows[static_cast<std::size_t>(N - 1)];
		ASSERT_EQ(r.experiment, "kernel-norm");
		const auto k = dyadic::cesaro_kernel_spectral(N, CesaroOrder(0.5), SystemKind::Kaczmarz, 7);
		ASSERT_NEAR(r.value, dyadic::lp_norm(k, 1.0), 1e-13);
	}
	std::vector<double> complete;
	for (std::size_t j = 0; j < 7; ++j)
	{
		const auto &r = rows[64 + j];
		EXPECT_EQ(r.experiment, "kernel-block-max");
		EXPECT_EQ(*r.find_derived("complete"), j < 6 ? 1.0 : 0.0);
		if (j < 6)
			complete.push_back(r.value);
	}
	EXPECT_DOUBLE_EQ(*rows.back().find_derived("spread_last4"), dyadic::plateau_spread(complete, 4));
}

TEST(KernelSurvey, PlateauSpread)
{
	const std::vector<double> v{9, 1, 2, 4};
	EXPECT_DOUBLE_EQ(dyadic::plateau_spread(v, 3), 0.75);
	EXPECT_DOUBLE_EQ(dyadic::plateau_spread(v, 1), 0.0);
	EXPECT_THROW(dyadic::plateau_spread(v, 5), dyadic::ContractViolation);
}

TEST(ContrastProbe, AtZeroBothGrow)
{
	const auto rows = dyadic::kernel_contrast_probe(GroupPoint(0, 1), 1, 8);
	for (const auto &r : rows)
	{
		const double N = std::stod(*r.find_param("N"));
		// K_N(0) = Σ_{j<N} (N-j)/(N+1) = N/2 for α = 1
		EXPECT_NEAR(r.value, N / 2.0, 1e-9);
		EXPECT_NEAR(*r.find_derived("paley"), N / 2.0, 1e-9);
	}
	EXPECT_EQ(*rows[0].find_derived("kaczmarz_increasing"), 1.0);
}

TEST(ContrastProbe, AtE0)
{
	const auto rows = dyadic::kernel_contrast_probe(GroupPoint::unit(0, 1), 3, 11);
	ASSERT_EQ(rows.size(), 9u);
	for (const auto &r : rows)
	{
		const int j = std::stoi(*r.find_param("j"));
		const double N = std::ldexp(1.0, j);
		EXPECT_NEAR(r.value, oracle::cesaro_kernel(SystemKind::Kaczmarz, static_cast<std::int64_t>(N), 1.0, 1), 1e-9);
		EXPECT_NEAR(std::abs(*r.find_derived("paley")), (N / 2.0) / (N + 1.0), 1e-12);
		EXPECT_LE(std::abs(*r.find_derived("paley")), 1.0);
	}
	EXPECT_EQ(*rows[0].find_derived("kaczmarz_increasing"), 1.0);
	EXPECT_EQ(*rows[0].find_param("x"), "1");
	EXPECT_THROW(dyadic::kernel_contrast_probe(GroupPoint(0, 1), 4, 3), dyadic::ContractViolation);
}

TEST(SneiderProbe, MeasuresAndRatioAtZero)
{
	std::vector<Index> ns;
	for (int j = 2; j <= 10; ++j)
		ns.push_back((Index{1} << j) - 1);
	const std::vector<double> ladder{0.1, 0.5, 1.0};
	const auto rows = dyadic::sneider_probe(ns, 10, ladder);
	ASSERT_EQ(rows.size(), ns.size() * ladder.size());
	for (const auto &r : rows)
	{
		const double n = std::stod(*r.find_param("n"));
		EXPECT_GE(r.value, 0.0);
		EXPECT_LE(r.value, 1.0);
		EXPECT_GE(*r.find_derived("block_measure"), r.value);
		EXPECT_LE(*r.find_derived("block_measure"), 1.0);
		EXPECT_NEAR(*r.find_derived("ratio_at_zero"), n / std::log(n), 1e-9);
		if (*r.find_param("C") == "0.1" && n >= 15)
			EXPECT_GT(*r.find_derived("block_measure"), 0.5) << "n=" << n;
	}
	// measure of the exceedance set computed from the definition
	const Index n = 13;
	const std::vector<Index> one{n};
	const auto r = dyadic::sneider_probe(one, 5, ladder);
	for (std::size_t c = 0; c < ladder.size(); ++c)
	{
		int hits = 0;
		for (std::uint64_t x = 0; x < 32; ++x)
			hits += oracle::dirichlet_path(SystemKind::Kaczmarz, n, x)[static_cast<std::size_t>(n)] / std::log(13.0) >= ladder[c];
		EXPECT_EQ(r[c].value, hits / 32.0);
	}
}

TEST(Convergence, CharacterDeficiencyClosedForm)
{
	const auto cone = dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0);
	for (double a : {0.5, 1.0})
		for (SystemKind s : {SystemKind::Kaczmarz, SystemKind::Paley})
			for (std::uint64_t j : {0u, 1u, 5u})
			{
				std::vector<SampledFunction> parts{dyadic::sample_walsh(s, j, 8), dyadic::sample_walsh(s, j, 8)};
				const auto f = SampledFunction::tensor(parts);
				const std::vector<int> n1s{3, 5, 8};
				const auto rows = dyadic::convergence_experiment(f, cone, {CesaroOrder(a), CesaroOrder(a)}, s, n1s);
				for (const auto &r : rows)
				{
					const auto n = static_cast<std::int64_t>(std::ldexp(1.0, std::stoi(*r.find_param("n1"))));
					const double w = oracle::cesaro(n - 1 - static_cast<std::int64_t>(j), a) / oracle::cesaro(n, a);
					EXPECT_NEAR(*r.find_derived("e_inf"), 1.0 - w * w, 1e-12);
					EXPECT_NEAR(r.value, 1.0 - w * w, 1e-12);
					EXPECT_EQ(*r.find_derived("in_cone"), 1.0);
					EXPECT_LE(*r.find_derived("sigma_sup"), *r.find_derived("envelope") * (1.0 + 1e-12));
				}
			}
}

TEST(Convergence, IndicatorL1ErrorDecreases)
{
	const int m = 8;
	const auto side = dyadic::indicator(dyadic::DyadicInterval(GroupPoint(0, m), 2), m);
	const std::vector<SampledFunction> parts{side, side};
	const auto f = SampledFunction::tensor(parts);
	const std::vector<int> n1s{2, 3, 4, 5, 6, 7, 8};
	const auto rows = dyadic::convergence_experiment(f, dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0),
	                                                 {CesaroOrder(1.0), CesaroOrder(1.0)}, SystemKind::Kaczmarz, n1s);
	const auto e = values(rows);
	for (std::size_t i = 1; i < e.size(); ++i)
		EXPECT_LT(e[i], e[i - 1]);
	EXPECT_EQ(*rows[2].find_param("n"), "16;16");
	// σ_n f at the smallest index against the definitional oracle
	const auto small = SampledFunction::tensor(std::vector<SampledFunction>{
	    dyadic::indicator(dyadic::DyadicInterval(GroupPoint(0, 4), 2), 4),
	    dyadic::indicator(dyadic::DyadicInterval(GroupPoint(0, 4), 2), 4)});
	const std::vector<int> four{2};
	const auto row = dyadic::convergence_experiment(small, dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0),
	                                                {CesaroOrder(1.0), CesaroOrder(1.0)}, SystemKind::Kaczmarz, four);
	const auto ref = oracle::cesaro_mean_2d(small, SystemKind::Kaczmarz, 4, 4, 1.0, 1.0);
	double e1 = 0.0;
	for (std::size_t i = 0; i < ref.size(); ++i)
		e1 += std::abs(ref[i] - small.values()(static_cast<Index>(i)));
	EXPECT_NEAR(row[0].value, e1 / static_cast<double>(ref.size()), 1e-12);
}

TEST(Convergence, ConeDiagonalIndex)
{
	EXPECT_EQ(dyadic::cone_diagonal_index(dyadic::ConeSpec::uniform(3, dyadic::crf::identity(), 1.0), 4),
	          (std::vector<Index>{16, 16, 16}));
	EXPECT_EQ(dyadic::cone_diagonal_index(dyadic::ConeSpec::uniform(2, dyadic::crf::power(1.5), 1.0), 2),
	          (std::vector<Index>{4, 8}));
	const SampledFunction f({3});
	const std::vector<int> one{1};
	EXPECT_THROW(dyadic::convergence_experiment(f, dyadic::ConeSpec::uniform(2, dyadic::crf::identity(), 1.0),
	                                            {CesaroOrder(1.0), CesaroOrder(1.0)}, SystemKind::Kaczmarz, one),
	             dyadic::ContractViolation);
}

TEST(SystemsCheck, AllZeroAtRankEight)
{
	const auto rows = dyadic::systems_check_experiment(8, 2);
	EXPECT_FALSE(rows.empty());
	for (const auto &r : rows)
		EXPECT_LE(r.value, 1e-12) << *r.find_param("check");
	const auto t = dyadic::transform_check_experiment(12, 10, 50, 3, 2);
	ASSERT_EQ(t.size(), 3u);
	EXPECT_LE(t[0].value, 1e-12);
	EXPECT_LE(t[1].value, 1e-10);
	EXPECT_EQ(t[2].value, 0.0);
	EXPECT_EQ(*t[2].find_param("seed"), "3");
}
}
