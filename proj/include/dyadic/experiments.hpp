#pragma once

#include "dyadic/cones.hpp"
#include "dyadic/records.hpp"
#include "dyadic/summation.hpp"

namespace dyadic
{
    /// Least-squares line y = slope * x + intercept.
    struct LinearFit
    {
        double slope = 0.0;
        double intercept = 0.0;
    };

    LinearFit least_squares(std::span<const double> x, std::span<const double> y);

    /// The largest half (at least two points) of an ascending sample, as used for fits.
    std::size_t upper_half_start(std::size_t n);

    // ---------------------------------------------------------------------
    // System and transform checks
    // ---------------------------------------------------------------------

    /// Rows: block-equality and factorization mismatch counts over n < 2^m,
    /// and the worst orthonormality deviation of each system at rank m.
    std::vector<ExperimentRecord> systems_check_experiment(int m, int threads = 1);

    /// Rows: FWHT round-trip error and Parseval relative error for a seeded random
    /// function at rank m, and the worst deviation of the Kaczmarz spectrum of κ_n
    /// from the unit vector at n over `samples` seeded random n < 2^unit_rank.
    std::vector<ExperimentRecord> transform_check_experiment(int m, int unit_rank, int samples, std::uint64_t seed,
                                                             int threads = 1);

    // ---------------------------------------------------------------------
    // Endpoint counterexample
    // ---------------------------------------------------------------------

    struct CounterexampleSpec
    {
        int n1 = 1;
        ConeSpec cone;
        /// α_1 <= ... <= α_d
        std::vector<CesaroOrder> alpha;

        /// p_0 = max_k 1/(1+α_k) = 1/(1+α_1).
        double p0() const;
        /// (n_1, n_2, ..., n_d) from the cone's γ.
        std::vector<int> nbar() const;
        void validate() const;
    };

    /// Smallest grid on which f and all of its L^N means are exact: (n_1+1, n_2+1, ...).
    std::vector<int> counterexample_ranks(const CounterexampleSpec &spec);

    /// f(x) = (D_{2^{n_1+1}} - D_{2^{n_1}})(x^1) · Π_{j>=2} w_{2^{n_j}-1}(x^j).
    SampledFunction build_counterexample(const CounterexampleSpec &spec, std::span<const int> ranks);

    /// n̄(k) for k = 0..n1_max.
    std::vector<std::vector<int>> nbar_sequence(const ConeSpec &cone, int n1_max);

    /// Index path {L^N : 1 <= N < 2^{n_1}} as Kaczmarz mean parameters.
    std::vector<MeanParams> ln_family(const CounterexampleSpec &spec);

    struct RatioPoint
    {
        /// || max_N |σ_{L^N} f| ||_{p_0}
        double maximal_norm = 0.0;
        /// ||f||_{H_{p_0}^γ}
        double hardy_norm = 0.0;
        double ratio = 0.0;
    };

    /// x^1-profile of |σ_{L^N} f| from the one-dimensional reduction:
    ///   Π_{j>=2} (A_{L_j - 2^{n_j}}^{α_j} / A_{L_j}^{α_j}) · A_N^{α_1} |K_N^{w,α_1}(τ_{n_1} x^1)| / A_{L_1}^{α_1},
    /// sampled at rank n_1 + 1.
    SampledFunction reduced_profile(const CounterexampleSpec &spec, Index N);

    /// Ratio through the reduction; the Hardy norm is the closed form 2^{(1-1/p_0) n_1}.
    RatioPoint counterexample_ratio_reduced(const CounterexampleSpec &spec, int threads = 1);

    /// Ratio through d-dimensional means and the martingale maximal function.
    RatioPoint counterexample_ratio_full(const CounterexampleSpec &spec, int threads = 1);

    struct RatioOptions
    {
        int threads = 1;
        /// The full path runs as an oracle at the smallest n_1 when n_1 <= this.
        int oracle_max_n1 = 5;
    };

    /// R(n_1) for each n_1 plus the slope of log R against log(n_1 / log n_1) over the largest
    /// half of the n_1 values; the slope is NaN when those abscissae coincide.
    std::vector<ExperimentRecord> ratio_experiment(std::span<const int> n1_values, const ConeSpec &cone,
                                                   const std::vector<CesaroOrder> &alpha,
                                                   const RatioOptions &options = {});

    // ---------------------------------------------------------------------
    // Lower bound for the Paley (C,α) maximal kernel
    // ---------------------------------------------------------------------

    struct GoginavaValues
    {
        /// ∫ max_{1<=N<2^n} (A_{N-1}^α |K_N^{w,α}|)^{1/(1+α)}
        double lemma = 0.0;
        /// (∫ max_{1<=N<2^n} A_N^α |K_N^{w,α}|)^{1+α}
        double proof = 0.0;
    };

    GoginavaValues goginava_integral(int n, const CesaroOrder &alpha, int threads = 1);

    enum class GoginavaVariant
    {
        Lemma,
        Proof,
        Both
    };

    std::vector<ExperimentRecord> goginava_experiment(std::span<const int> n_values, const CesaroOrder &alpha,
                                                      GoginavaVariant variant, int threads = 1);

    // ---------------------------------------------------------------------
    // Kernel surveys and probes
    // ---------------------------------------------------------------------

    /// Max spread (max - min) / max of the last `blocks` entries.
    double plateau_spread(std::span<const double> block_maxima, std::size_t blocks);

    /// One row per N with ||K_N||_1, then one row per dyadic block with its maximum;
    /// spread_last4 uses the last four complete blocks.
    std::vector<ExperimentRecord> kernel_survey_experiment(SystemKind s, const CesaroOrder &alpha, Index max_n,
                                                           int m, int threads = 1);

    /// K_{2^j}^{κ,1}(x) and K_{2^j}^{w,1}(x) for j = j_lo..j_hi.
    std::vector<ExperimentRecord> kernel_contrast_probe(const GroupPoint &x, int j_lo, int j_hi);

    /// For each n: measure of {D_n^κ / log n >= C} and of the same set for
    /// the running maximum over the current dyadic block, per C in the ladder.
    std::vector<ExperimentRecord> sneider_probe(std::span<const Index> n_values, int m,
                                                std::span<const double> c_ladder);

    /// Cone indices used by the convergence experiment: (2^{n_1}, ⌊γ_j(2^{n_1})⌋, ...).
    std::vector<Index> cone_diagonal_index(const ConeSpec &cone, int n1);

    /// e_1 = ||σ_n f - f||_1 and e_∞ = ||σ_n f - f||_∞ along the cone diagonal.
    /// Every row also checks ||σ_n f||_∞ <= ||f||_∞ Π ||K_{n_i}||_1.
    std::vector<ExperimentRecord> convergence_experiment(const SampledFunction &f, const ConeSpec &cone,
                                                         const std::vector<CesaroOrder> &alpha, SystemKind s,
                                                         std::span<const int> n1_values);
}
