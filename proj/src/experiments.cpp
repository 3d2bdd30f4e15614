#include "dyadic/experiments.hpp"

#include "dyadic/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace dyadic
{
    namespace
    {
        using Clock = std::chrono::steady_clock;

        double seconds_since(Clock::time_point start)
        {
            return std::chrono::duration<double>(Clock::now() - start).count();
        }

        std::string join_alpha(const std::vector<CesaroOrder> &alpha)
        {
            std::string out;
            for (std::size_t i = 0; i < alpha.size(); ++i)
                out += (i ? ";" : "") + format_double(alpha[i].value());
            return out;
        }

        std::string cone_label(const ConeSpec &cone)
        {
            std::string out;
            for (std::size_t j = 0; j < cone.crf.size(); ++j)
                out += (j ? ";" : "") + cone.crf[j].name + "/beta=" + format_double(cone.beta[j]);
            return out;
        }

        /// A_j^α along a nondecreasing sequence of indices.
        class CesaroWalker
        {
        public:
            explicit CesaroWalker(double alpha) : alpha_(alpha) {}

            double at(Index target)
            {
                require(target >= index_, "CesaroWalker: indices must be nondecreasing");
                for (; index_ < target; ++index_)
                    value_ *= (alpha_ + static_cast<double>(index_ + 1)) / static_cast<double>(index_ + 1);
                return value_;
            }

        private:
            double alpha_;
            Index index_ = 0;
            double value_ = 1.0;
        };

        /// Factor multiplying A_N^{α_1}|K_N^{w,α_1}(τ x^1)| in |σ_{L^N} f|, for N = 1..2^{n_1}-1.
        std::vector<double> reduction_weights(const CounterexampleSpec &spec)
        {
            const std::vector<int> nbar = spec.nbar();
            const Index count = (Index{1} << spec.n1) - 1;
            std::vector<double> weights(static_cast<std::size_t>(count));
            CesaroWalker first_dim(spec.alpha[0].value());
            std::vector<CesaroWalker> full, shifted;
            for (int j = 1; j < spec.cone.d; ++j)
            {
                full.emplace_back(spec.alpha[static_cast<std::size_t>(j)].value());
                shifted.emplace_back(spec.alpha[static_cast<std::size_t>(j)].value());
            }
            for (Index N = 1; N <= count; ++N)
            {
                const std::vector<Index> L = ln_index(spec.cone, spec.n1, N);
                double w = 1.0 / first_dim.at(L[0]);
                for (int j = 1; j < spec.cone.d; ++j)
                {
                    const auto k = static_cast<std::size_t>(j);
                    const Index base = Index{1} << nbar[k];
                    require(L[k] >= base, "counterexample: L^N below the support of f");
                    w *= shifted[k - 1].at(L[k] - base) / full[k - 1].at(L[k]);
                }
                weights[static_cast<std::size_t>(N - 1)] = w;
            }
            return weights;
        }

        SampledFunction lift(const SampledFunction &f, int rank)
        {
            // f depends on the first f.rank(0) coordinates only
            SampledFunction out({rank});
            const Index mask = f.size() - 1;
            for (Index j = 0; j < out.size(); ++j)
                out.values()(j) = f.values()(j & mask);
            return out;
        }
    }

    LinearFit least_squares(std::span<const double> x, std::span<const double> y)
    {
        require(x.size() == y.size() && x.size() >= 2, "least_squares: need at least two paired points");
        const double n = static_cast<double>(x.size());
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        require(sxx > 0.0, "least_squares: degenerate abscissae");
        const double slope = sxy / sxx;
        return {slope, my - slope * mx};
    }

    std::size_t upper_half_start(std::size_t n)
    {
        if (n <= 2)
            return 0;
        return std::min(n / 2, n - 2);
    }

    std::vector<ExperimentRecord> systems_check_experiment(int m, int threads)
    {
        require(m >= 1 && m <= 14, "systems_check: rank must lie in [1, 14]");
        const auto start = Clock::now();
        const Index size = Index{1} << m;
        const int workers = static_cast<int>(std::min<Index>(resolve_threads(threads), size));

        std::vector<Index> block_bad(static_cast<std::size_t>(workers), 0);
        std::vector<Index> factor_bad(block_bad);
        std::vector<double> ortho_w(static_cast<std::size_t>(workers), 0.0), ortho_k(ortho_w);
        parallel_chunks(0, size, workers, [&](int w, Index lo, Index hi)
                        {
            const auto slot = static_cast<std::size_t>(w);
            for (Index n = lo; n < hi; ++n)
            {
                const auto un = static_cast<std::uint64_t>(n);
                const std::uint64_t p = kaczmarz_perm(un);
                const int k = n == 0 ? -1 : order(un);
                if (kaczmarz_perm(p) != un || (n > 0 && order(p) != k))
                    ++block_bad[slot];
                for (Index j = 0; j < size; ++j)
                {
                    const GroupPoint x(static_cast<std::uint64_t>(j), m);
                    const int kz = kaczmarz(un, x);
                    if (kz != walsh_paley(p, x))
                        ++block_bad[slot];
                    const int factored = n == 0 ? 1
                                                : rademacher(k, x) * walsh_paley(un - (std::uint64_t{1} << k), tau(x, k));
                    if (kz != factored)
                        ++factor_bad[slot];
                }
                for (SystemKind s : {SystemKind::Paley, SystemKind::Kaczmarz})
                {
                    Eigen::ArrayXd c = fourier_coeffs(sample_walsh(s, un, m), s).coeffs;
                    c(n) -= 1.0;
                    double &worst = s == SystemKind::Paley ? ortho_w[slot] : ortho_k[slot];
                    worst = std::max(worst, c.abs().maxCoeff());
                }
            } });

        const double elapsed = seconds_since(start);
        auto row = [&](const std::string &check, double value)
        {
            ExperimentRecord r;
            r.experiment = "systems-check";
            r.param("check", check).param("rank", m);
            r.value = value;
            r.wall_time = elapsed;
            return r;
        };
        return {row("block-equality", static_cast<double>(std::accumulate(block_bad.begin(), block_bad.end(), Index{0}))),
                row("factorization", static_cast<double>(std::accumulate(factor_bad.begin(), factor_bad.end(), Index{0}))),
                row("orthonormality-paley", *std::max_element(ortho_w.begin(), ortho_w.end())),
                row("orthonormality-kaczmarz", *std::max_element(ortho_k.begin(), ortho_k.end()))};
    }

    std::vector<ExperimentRecord> transform_check_experiment(int m, int unit_rank, int samples, std::uint64_t seed,
                                                             int threads)
    {
        require(m >= 1 && m <= 24, "transform_check: rank must lie in [1, 24]");
        require(unit_rank >= 1 && unit_rank <= 24, "transform_check: unit rank must lie in [1, 24]");
        require(samples >= 0, "transform_check: negative sample count");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        const Index size = Index{1} << m;

        auto start = Clock::now();
        SampledFunction f({m});
        for (Index j = 0; j < size; ++j)
            f.values()(j) = unit(rng);
        const Spectrum spec = fwht(f);
        const double round_trip = (inverse_fwht(spec).values() - f.values()).abs().maxCoeff();
        const SampledFunction squared(f.ranks(), f.values().square());
        const double energy = integrate(squared);
        const Eigen::ArrayXd squares = spec.coeffs.square();
        const std::vector<double> c2(squares.begin(), squares.end());
        const double parseval = std::abs(energy - pairwise_sum(c2)) / energy;
        const double transform_time = seconds_since(start);

        start = Clock::now();
        std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << unit_rank) - 1);
        std::vector<std::uint64_t> indices(static_cast<std::size_t>(samples));
        for (auto &n : indices)
            n = pick(rng);
        const int workers = static_cast<int>(std::max<Index>(1, std::min<Index>(resolve_threads(threads), samples)));
        std::vector<double> worst(static_cast<std::size_t>(workers), 0.0);
        parallel_chunks(0, samples, workers, [&](int w, Index lo, Index hi)
                        {
            for (Index i = lo; i < hi; ++i)
            {
                const std::uint64_t n = indices[static_cast<std::size_t>(i)];
                const SampledFunction kn = SampledFunction::sample(unit_rank, [n](const GroupPoint &x)
                                                                   { return static_cast<double>(kaczmarz(n, x)); });
                Eigen::ArrayXd c = fourier_coeffs(kn, SystemKind::Kaczmarz).coeffs;
                c(static_cast<Index>(n)) -= 1.0;
                worst[static_cast<std::size_t>(w)] = std::max(worst[static_cast<std::size_t>(w)], c.abs().maxCoeff());
            } });
        const double unit_time = seconds_since(start);

        auto row = [&](const std::string &check, double value, double elapsed)
        {
            ExperimentRecord r;
            r.experiment = "transform-check";
            r.param("check", check).param("rank", m).param("seed", std::to_string(seed));
            r.value = value;
            r.wall_time = elapsed;
            return r;
        };
        std::vector<ExperimentRecord> out{row("round-trip", round_trip, transform_time),
                                          row("parseval", parseval, transform_time)};
        out.push_back(row("kaczmarz-unit", *std::max_element(worst.begin(), worst.end()), unit_time));
        out.back().param("samples", samples).param("unit_rank", unit_rank);
        return out;
    }

    double CounterexampleSpec::p0() const
    {
        double p = 0.0;
        for (const auto &a : alpha)
            p = std::max(p, 1.0 / (1.0 + a.value()));
        return p;
    }

    std::vector<int> CounterexampleSpec::nbar() const { return nbar_of(cone, n1); }

    void CounterexampleSpec::validate() const
    {
        require(n1 >= 1 && n1 <= 24, "counterexample: n1 must lie in [1, 24]");
        require(static_cast<int>(alpha.size()) == cone.d, "counterexample: one alpha per dimension");
        require(static_cast<int>(cone.crf.size()) == cone.d - 1, "counterexample: cone needs d-1 CRF entries");
        for (std::size_t i = 1; i < alpha.size(); ++i)
            require(alpha[i - 1].value() <= alpha[i].value(), "counterexample: alpha must be nondecreasing");
    }

    std::vector<int> counterexample_ranks(const CounterexampleSpec &spec)
    {
        std::vector<int> ranks = spec.nbar();
        for (int &r : ranks)
            ++r;
        return ranks;
    }

    SampledFunction build_counterexample(const CounterexampleSpec &spec, std::span<const int> ranks)
    {
        spec.validate();
        const std::vector<int> nbar = spec.nbar();
        require(ranks.size() == nbar.size(), "build_counterexample: rank dimension mismatch");
        for (std::size_t j = 0; j < nbar.size(); ++j)
            require(ranks[j] >= nbar[j] + 1, "build_counterexample: insufficient rank");

        std::vector<SampledFunction> factors;
        const int n1 = spec.n1;
        // D_{2^k} = 2^k on I_k, 0 elsewhere
        factors.push_back(SampledFunction::sample(ranks[0], [&](const GroupPoint &x)
                                                  {
            const std::uint64_t low = x.bits & ((std::uint64_t{1} << (n1 + 1)) - 1);
            double v = 0.0;
            if (low == 0)
                v += std::ldexp(1.0, n1 + 1);
            if ((low & ((std::uint64_t{1} << n1) - 1)) == 0)
                v -= std::ldexp(1.0, n1);
            return v; }));
        for (std::size_t j = 1; j < nbar.size(); ++j)
        {
            const std::uint64_t index = (std::uint64_t{1} << nbar[j]) - 1;
            factors.push_back(sample_walsh(SystemKind::Paley, index, ranks[j]));
        }
        return SampledFunction::tensor(factors);
    }

    std::vector<std::vector<int>> nbar_sequence(const ConeSpec &cone, int n1_max)
    {
        std::vector<std::vector<int>> out;
        for (int k = 0; k <= n1_max; ++k)
            out.push_back(nbar_of(cone, k));
        return out;
    }

    std::vector<MeanParams> ln_family(const CounterexampleSpec &spec)
    {
        spec.validate();
        std::vector<MeanParams> family;
        for (Index N = 1; N < (Index{1} << spec.n1); ++N)
            family.push_back({ln_index(spec.cone, spec.n1, N), spec.alpha, SystemKind::Kaczmarz});
        return family;
    }

    SampledFunction reduced_profile(const CounterexampleSpec &spec, Index N)
    {
        spec.validate();
        require(N >= 1 && N < (Index{1} << spec.n1), "reduced_profile: N must satisfy 0 < N < 2^n1");
        const double weight = reduction_weights(spec)[static_cast<std::size_t>(N - 1)];
        const CesaroOrder &a1 = spec.alpha[0];
        SampledFunction kernel = cesaro_kernel_spectral(N, a1, SystemKind::Paley, spec.n1);
        kernel.values() = kernel.values().abs() * (weight * cesaro_number(N, a1.value()));
        return lift(compose_tau(kernel, spec.n1), spec.n1 + 1);
    }

    RatioPoint counterexample_ratio_reduced(const CounterexampleSpec &spec, int threads)
    {
        spec.validate();
        const int m = spec.n1;
        const Index count = (Index{1} << m) - 1;
        const std::vector<double> weights = reduction_weights(spec);
        const Eigen::ArrayXd table = cesaro_numbers(Index{1} << m, spec.alpha[0].value());

        const int workers = static_cast<int>(std::min<Index>(resolve_threads(threads), count));
        std::vector<Eigen::ArrayXd> partial(static_cast<std::size_t>(workers), Eigen::ArrayXd::Zero(Index{1} << m));
        parallel_chunks(1, count + 1, workers, [&](int w, Index lo, Index hi)
                        {
            auto &acc = partial[static_cast<std::size_t>(w)];
            for (Index N = lo; N < hi; ++N)
            {
                Eigen::ArrayXd k = cesaro_kernel_spectrum(N, table, SystemKind::Paley, m);
                fwht_inplace(k);
                acc = acc.max(k.abs() * (weights[static_cast<std::size_t>(N - 1)] * table(N)));
            } });
        Eigen::ArrayXd field = partial.front();
        for (std::size_t w = 1; w < partial.size(); ++w)
            field = field.max(partial[w]);

        const double p0 = spec.p0();
        RatioPoint out;
        out.maximal_norm = lp_norm(compose_tau(SampledFunction({m}, std::move(field)), m), p0);
        out.hardy_norm = std::pow(2.0, (1.0 - 1.0 / p0) * spec.n1);
        out.ratio = out.maximal_norm / out.hardy_norm;
        return out;
    }

    RatioPoint counterexample_ratio_full(const CounterexampleSpec &spec, int threads)
    {
        const std::vector<int> ranks = counterexample_ranks(spec);
        const SampledFunction f = build_counterexample(spec, ranks);
        const std::vector<MeanParams> family = ln_family(spec);
        const MaximalField field = maximal_over(f, family, threads);
        const double p0 = spec.p0();
        RatioPoint out;
        out.maximal_norm = lp_norm(field.values, p0);
        out.hardy_norm = hardy_norm(f, p0, nbar_sequence(spec.cone, spec.n1 + 1));
        out.ratio = out.maximal_norm / out.hardy_norm;
        return out;
    }

    std::vector<ExperimentRecord> ratio_experiment(std::span<const int> n1_values, const ConeSpec &cone,
                                                   const std::vector<CesaroOrder> &alpha,
                                                   const RatioOptions &options)
    {
        require(!n1_values.empty(), "ratio_experiment: no n1 values");
        const int smallest = *std::min_element(n1_values.begin(), n1_values.end());
        std::vector<ExperimentRecord> records;
        for (int n1 : n1_values)
        {
            const auto start = Clock::now();
            CounterexampleSpec spec{n1, cone, alpha};
            spec.validate();
            const RatioPoint reduced = counterexample_ratio_reduced(spec, options.threads);
            const double a1 = alpha[0].value();
            const double growth = n1 >= 2 ? std::pow(n1 / std::log(static_cast<double>(n1)), 1.0 + a1)
                                          : std::nan("");

            ExperimentRecord r;
            r.experiment = "counterexample";
            r.param("n1", n1).param("alpha", join_alpha(alpha)).param("cone", cone_label(cone));
            r.param("p0", spec.p0()).param("path", "reduced");
            r.value = reduced.ratio;
            r.put("maximal_norm", reduced.maximal_norm)
                .put("hardy_norm", reduced.hardy_norm)
                .put("growth_reference", growth)
                .put("ratio_over_growth", reduced.ratio / growth);
            if (n1 == smallest && n1 <= options.oracle_max_n1)
            {
                const RatioPoint full = counterexample_ratio_full(spec, options.threads);
                r.put("full_ratio", full.ratio)
                    .put("full_hardy_norm", full.hardy_norm)
                    .put("oracle_abs_diff", std::abs(full.ratio - reduced.ratio));
            }
            r.wall_time = seconds_since(start);
            records.push_back(std::move(r));
        }

        // fit over the largest half of the sampled n1 values with n1 >= 2;
        // n/log n is not injective (2 and 4 coincide), so the abscissae may degenerate
        std::vector<std::pair<double, double>> pts;
        for (const auto &r : records)
        {
            const double n1 = std::stod(*r.find_param("n1"));
            if (n1 >= 2)
                pts.emplace_back(n1, std::log(r.value));
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end(), [](const auto &a, const auto &b)
                              { return a.first == b.first; }),
                  pts.end());
        double slope = std::nan("");
        double c_lower = std::nan("");
        if (pts.size() >= 2)
        {
            std::vector<double> x, y;
            for (std::size_t i = upper_half_start(pts.size()); i < pts.size(); ++i)
            {
                x.push_back(std::log(pts[i].first / std::log(pts[i].first)));
                y.push_back(pts[i].second);
            }
            if (std::any_of(x.begin(), x.end(), [&](double v)
                            { return v != x.front(); }))
                slope = least_squares(x, y).slope;
        }
        for (const auto &r : records)
        {
            const double v = *r.find_derived("ratio_over_growth");
            if (std::isfinite(v))
                c_lower = std::isnan(c_lower) ? v : std::min(c_lower, v);
        }
        for (auto &r : records)
            r.put("slope", slope).put("c_lower", c_lower);
        return records;
    }

    GoginavaValues goginava_integral(int n, const CesaroOrder &alpha, int threads)
    {
        require(n >= 1 && n <= 24, "goginava_integral: n must lie in [1, 24]");
        const Index count = (Index{1} << n) - 1;
        const double a = alpha.value();
        const Eigen::ArrayXd table = cesaro_numbers(Index{1} << n, a);
        const int workers = static_cast<int>(std::min<Index>(resolve_threads(threads), count));
        const Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(Index{1} << n);
        std::vector<Eigen::ArrayXd> lemma(static_cast<std::size_t>(workers), zero), proof(lemma);
        parallel_chunks(1, count + 1, workers, [&](int w, Index lo, Index hi)
                        {
            auto &l = lemma[static_cast<std::size_t>(w)];
            auto &p = proof[static_cast<std::size_t>(w)];
            for (Index N = lo; N < hi; ++N)
            {
                Eigen::ArrayXd k = cesaro_kernel_spectrum(N, table, SystemKind::Paley, n);
                fwht_inplace(k);
                k = k.abs();
                l = l.max((table(N - 1) * k).pow(1.0 / (1.0 + a)));
                p = p.max(table(N) * k);
            } });
        Eigen::ArrayXd l = lemma.front(), p = proof.front();
        for (std::size_t w = 1; w < lemma.size(); ++w)
        {
            l = l.max(lemma[w]);
            p = p.max(proof[w]);
        }
        GoginavaValues out;
        out.lemma = integrate(SampledFunction({n}, std::move(l)));
        out.proof = std::pow(integrate(SampledFunction({n}, std::move(p))), 1.0 + a);
        return out;
    }

    std::vector<ExperimentRecord> goginava_experiment(std::span<const int> n_values, const CesaroOrder &alpha,
                                                      GoginavaVariant variant, int threads)
    {
        std::vector<ExperimentRecord> records;
        for (int n : n_values)
        {
            const auto start = Clock::now();
            const GoginavaValues v = goginava_integral(n, alpha, threads);
            const double scale = std::log(n + 2.0) / n;
            ExperimentRecord r;
            r.experiment = "goginava";
            r.param("n", n).param("alpha", alpha.value());
            switch (variant)
            {
            case GoginavaVariant::Lemma:
                r.param("variant", "lemma");
                r.value = v.lemma;
                r.put("scaled", v.lemma * scale);
                break;
            case GoginavaVariant::Proof:
                r.param("variant", "proof");
                r.value = v.proof;
                r.put("scaled", v.proof * scale);
                break;
            case GoginavaVariant::Both:
                r.param("variant", "both");
                r.value = v.lemma;
                r.put("lemma", v.lemma).put("proof", v.proof);
                r.put("lemma_scaled", v.lemma * scale).put("proof_scaled", v.proof * scale);
                break;
            }
            r.wall_time = seconds_since(start);
            records.push_back(std::move(r));
        }
        return records;
    }

    double plateau_spread(std::span<const double> block_maxima, std::size_t blocks)
    {
        require(blocks >= 1 && blocks <= block_maxima.size(), "plateau_spread: not enough blocks");
        const auto tail = block_maxima.subspan(block_maxima.size() - blocks);
        const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
        return (*hi - *lo) / *hi;
    }

    std::vector<ExperimentRecord> kernel_survey_experiment(SystemKind s, const CesaroOrder &alpha, Index max_n,
                                                           int m, int threads)
    {
        const auto start = Clock::now();
        const KernelTable table = kernel_norm_survey(s, alpha, max_n, m, threads);
        const double elapsed = seconds_since(start);
        std::vector<ExperimentRecord> records;
        for (Index N = 1; N <= max_n; ++N)
        {
            ExperimentRecord r;
            r.experiment = "kernel-norm";
            r.param("system", std::string(to_string(s))).param("alpha", alpha.value()).param("rank", m);
            r.param("N", static_cast<double>(N));
            r.value = table.norms[static_cast<std::size_t>(N - 1)];
            records.push_back(std::move(r));
        }
        const std::vector<double> blocks = table.block_maxima();
        // block j is complete when it reaches 2^{j+1} - 1
        const auto complete = static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(max_n + 1)) - 1);
        const std::vector<double> full(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(complete));
        const double spread = full.size() >= 4 ? plateau_spread(full, 4) : std::nan("");
        for (std::size_t j = 0; j < blocks.size(); ++j)
        {
            ExperimentRecord r;
            r.experiment = "kernel-block-max";
            r.param("system", std::string(to_string(s))).param("alpha", alpha.value()).param("rank", m);
            r.param("block", static_cast<double>(j));
            r.value = blocks[j];
            r.put("complete", j < complete ? 1.0 : 0.0);
            r.put("spread_last4", spread);
            r.wall_time = elapsed;
            records.push_back(std::move(r));
        }
        return records;
    }

    std::vector<ExperimentRecord> kernel_contrast_probe(const GroupPoint &x, int j_lo, int j_hi)
    {
        require(j_lo >= 0 && j_lo <= j_hi && j_hi <= 24, "kernel_contrast_probe: bad j range");
        const CesaroOrder fejer(1.0);
        std::string label;
        for (int c : x.coordinates())
            label += static_cast<char>('0' + c);
        std::vector<ExperimentRecord> records;
        for (int j = j_lo; j <= j_hi; ++j)
        {
            const auto start = Clock::now();
            const GroupPoint at(x.bits, std::max(x.resolution, j));
            const Index N = Index{1} << j;
            ExperimentRecord r;
            r.experiment = "contrast";
            r.param("x", label).param("j", j).param("N", static_cast<double>(N));
            r.value = cesaro_kernel_at(N, fejer, SystemKind::Kaczmarz, at);
            r.put("paley", cesaro_kernel_at(N, fejer, SystemKind::Paley, at));
            r.wall_time = seconds_since(start);
            records.push_back(std::move(r));
        }
        bool increasing = true, decreasing = true;
        for (std::size_t i = 1; i < records.size(); ++i)
        {
            increasing = increasing && records[i].value > records[i - 1].value;
            decreasing = decreasing && std::abs(*records[i].find_derived("paley")) <
                                           std::abs(*records[i - 1].find_derived("paley"));
        }
        const double paley_final = std::abs(*records.back().find_derived("paley"));
        for (auto &r : records)
            r.put("kaczmarz_increasing", increasing ? 1.0 : 0.0)
                .put("paley_decreasing", decreasing ? 1.0 : 0.0)
                .put("paley_final_abs", paley_final);
        return records;
    }

    std::vector<ExperimentRecord> sneider_probe(std::span<const Index> n_values, int m,
                                                std::span<const double> c_ladder)
    {
        require(m >= 1 && m <= 24, "sneider_probe: rank out of range");
        require(!n_values.empty() && !c_ladder.empty(), "sneider_probe: empty n or C list");
        std::vector<Index> ns(n_values.begin(), n_values.end());
        std::sort(ns.begin(), ns.end());
        require(ns.front() >= 2 && ns.back() <= (Index{1} << m), "sneider_probe: n must lie in [2, 2^m]");

        const Index size = Index{1} << m;
        Eigen::ArrayXd dirichlet = Eigen::ArrayXd::Zero(size);
        Eigen::ArrayXd block_max = Eigen::ArrayXd::Zero(size);
        std::vector<ExperimentRecord> records;
        std::size_t next = 0;
        auto start = Clock::now();
        for (Index n = 1; n <= ns.back(); ++n)
        {
            // D_n = D_{n-1} + κ_{n-1}
            const std::uint64_t p = kaczmarz_perm(static_cast<std::uint64_t>(n - 1));
            for (Index x = 0; x < size; ++x)
                dirichlet(x) += std::popcount(p & static_cast<std::uint64_t>(x)) & 1 ? -1.0 : 1.0;
            if (n < 2)
                continue;
            const double log_n = std::log(static_cast<double>(n));
            if (std::has_single_bit(static_cast<std::uint64_t>(n)))
                block_max = dirichlet / log_n;
            else
                block_max = block_max.max(dirichlet / log_n);
            for (; next < ns.size() && ns[next] == n; ++next)
            {
                for (double c : c_ladder)
                {
                    ExperimentRecord r;
                    r.experiment = "sneider";
                    r.param("n", static_cast<double>(n)).param("C", c).param("rank", m);
                    r.value = ((dirichlet / log_n) >= c).cast<double>().mean();
                    r.put("block_measure", (block_max >= c).cast<double>().mean());
                    r.put("ratio_at_zero", dirichlet(0) / log_n);
                    r.wall_time = seconds_since(start);
                    records.push_back(std::move(r));
                }
                start = Clock::now();
            }
        }
        return records;
    }

    std::vector<Index> cone_diagonal_index(const ConeSpec &cone, int n1)
    {
        require(n1 >= 0 && n1 < 62, "cone_diagonal_index: n1 out of range");
        const Index first = Index{1} << n1;
        std::vector<Index> n{first};
        for (const auto &c : cone.crf)
            n.push_back(static_cast<Index>(std::floor(c.gamma(static_cast<double>(first)))));
        return n;
    }

    std::vector<ExperimentRecord> convergence_experiment(const SampledFunction &f, const ConeSpec &cone,
                                                         const std::vector<CesaroOrder> &alpha, SystemKind s,
                                                         std::span<const int> n1_values)
    {
        require(cone.d == f.dims(), "convergence_experiment: cone and function dimensions differ");
        require(static_cast<int>(alpha.size()) == f.dims(), "convergence_experiment: one alpha per dimension");
        const Spectrum paley = fwht(f);
        const double f_sup = lp_norm(f, kInfinity);
        std::vector<ExperimentRecord> records;
        for (int n1 : n1_values)
        {
            const auto start = Clock::now();
            const std::vector<Index> n = cone_diagonal_index(cone, n1);
            const SampledFunction sigma = cesaro_mean(paley, {n, alpha, s});

            double kernel_norms = 1.0;
            for (int i = 0; i < f.dims(); ++i)
            {
                Eigen::ArrayXd k = cesaro_kernel_spectrum(n[static_cast<std::size_t>(i)],
                                                          alpha[static_cast<std::size_t>(i)], s, f.rank(i));
                fwht_inplace(k);
                kernel_norms *= lp_norm(SampledFunction({f.rank(i)}, std::move(k)), 1.0);
            }
            const double sigma_sup = lp_norm(sigma, kInfinity);
            if (sigma_sup > f_sup * kernel_norms * (1.0 + 1e-12) + 1e-300)
                throw std::logic_error("convergence_experiment: convolution envelope violated");

            SampledFunction diff(f.ranks(), sigma.values() - f.values());
            ExperimentRecord r;
            r.experiment = "converge";
            std::string idx;
            for (std::size_t i = 0; i < n.size(); ++i)
                idx += (i ? ";" : "") + std::to_string(n[i]);
            r.param("n1", n1).param("n", idx).param("alpha", join_alpha(alpha));
            r.param("system", std::string(to_string(s))).param("cone", cone_label(cone));
            r.value = lp_norm(diff, 1.0);
            r.put("e_inf", lp_norm(diff, kInfinity))
                .put("in_cone", cone_contains(cone, n) ? 1.0 : 0.0)
                .put("sigma_sup", sigma_sup)
                .put("envelope", f_sup * kernel_norms);
            r.wall_time = seconds_since(start);
            records.push_back(std::move(r));
        }
        return records;
    }
}
