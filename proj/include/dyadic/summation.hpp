#pragma once

#include "dyadic/cesaro.hpp"

namespace dyadic
{
    /// Index, order and system of a d-dimensional (C,α) mean σ_n^{ψ,α}.
    struct MeanParams
    {
        std::vector<Index> n;
        std::vector<CesaroOrder> alpha;
        SystemKind system = SystemKind::Kaczmarz;
    };

    /// Rectangular partial sum Σ_{j<k} f̂^ψ(j) ψ_j; S_0 = 0.
    SampledFunction partial_sum(const SampledFunction &f, std::span<const Index> k, SystemKind s);

    /// σ_n^{ψ,α} f as the dyadic convolution of f with the product kernel,
    /// computed by multiplying Paley spectra. Exact for any n: indices at or
    /// beyond 2^{m_i} only touch frequencies where f's spectrum vanishes.
    SampledFunction cesaro_mean(const SampledFunction &f, const MeanParams &p);

    /// Same, starting from the Paley spectrum of f (reused across a sweep).
    SampledFunction cesaro_mean(const Spectrum &paley, const MeanParams &p);

    /// Pointwise sup of |σ_n f| over a finite family.
    struct MaximalField
    {
        SampledFunction values;
        std::size_t family_size = 0;
    };

    MaximalField maximal_over(const SampledFunction &f, std::span<const MeanParams> family, int threads = 1);

    /// Pointwise maximum of two fields over the same grid; the union of their families.
    MaximalField combine(const MaximalField &a, const MaximalField &b);

    /// sup over the sequence of |S_{2^{n_1},...,2^{n_d}} f|. Entries beyond the
    /// grid rank are clamped, since S_{2^n} f = f once n >= m.
    SampledFunction martingale_maximal(const SampledFunction &f, std::span<const std::vector<int>> nbar_seq);

    /// ||f*||_p along the given index sequence.
    double hardy_norm(const SampledFunction &f, double p, std::span<const std::vector<int>> nbar_seq);

    /// Product of dyadic intervals, one per dimension.
    struct Rectangle
    {
        std::vector<DyadicInterval> sides;
        double measure() const;
        bool contains(std::span<const Index> cell, std::span<const int> ranks) const;
    };

    /// True iff supp a ⊆ I, ||a||_∞ <= μ(I)^{-1/p} and ∫_I a = 0 (to 1e-12).
    bool atom_validate(const SampledFunction &a, const Rectangle &I, double p);
}
