#pragma once

#include "dyadic/systems.hpp"

namespace dyadic
{
    /// Order α of a (C,α) mean, 0 < α <= 1 (α = 1 is the Fejér mean).
    class CesaroOrder
    {
    public:
        explicit CesaroOrder(double alpha);
        double value() const { return alpha_; }

    private:
        double alpha_;
    };

    /// A_j^α = (α+1)(α+2)...(α+j)/j!, α > -1.
    double cesaro_number(Index j, double alpha);

    /// A_0^α, ..., A_jmax^α by the multiplicative recurrence.
    Eigen::ArrayXd cesaro_numbers(Index jmax, double alpha);

    /// Smallest m with N <= 2^m.
    int exact_rank(Index N);

    /// D_n^ψ = Σ_{k<n} ψ_k sampled at rank m by direct evaluation, D_0 = 0.
    SampledFunction dirichlet_kernel(Index n, SystemKind s, int m);

    /// Slow path: (1/A_N^α) Σ_{k=0}^{N} A_{N-k}^{α-1} D_k^ψ, cost O(N 2^m).
    SampledFunction cesaro_kernel_definitional(Index N, const CesaroOrder &alpha, SystemKind s, int m);

    /// Paley-indexed coefficients of K_N^{ψ,α} below 2^m:
    /// the ψ_j coefficient is A_{N-1-j}^α / A_N^α for j < N, stored at paley_index(s, j).
    /// For N > 2^m the result is the spectrum of the conditional expectation at rank m.
    Eigen::ArrayXd cesaro_kernel_spectrum(Index N, const CesaroOrder &alpha, SystemKind s, int m);

    /// Same, reusing a precomputed table of A_i^α with at least N+1 entries.
    Eigen::ArrayXd cesaro_kernel_spectrum(Index N, const Eigen::ArrayXd &cesaro_table, SystemKind s, int m);

    /// Fast path: inverse transform of the closed-form spectrum, cost O(2^m m).
    SampledFunction cesaro_kernel_spectral(Index N, const CesaroOrder &alpha, SystemKind s, int m);

    /// K_N^{ψ,α}(x) as Σ_{j<N} (A_{N-1-j}^α / A_N^α) ψ_j(x); no grid, cost O(N).
    double cesaro_kernel_at(Index N, const CesaroOrder &alpha, SystemKind s, const GroupPoint &x);

    struct KernelTable
    {
        SystemKind system;
        CesaroOrder alpha;
        Index max_n;
        /// norms[N-1] = ||K_N||_1 for N = 1..max_n.
        std::vector<double> norms;

        /// max{||K_N||_1 : 2^j <= N < 2^{j+1}, N <= max_n} for j = 0,1,...
        std::vector<double> block_maxima() const;
    };

    /// L1 norms of the spectral kernels K_1..K_max_n at rank m.
    KernelTable kernel_norm_survey(SystemKind s, const CesaroOrder &alpha, Index max_n, int m, int threads = 1);
}
