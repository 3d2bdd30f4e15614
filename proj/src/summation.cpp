#include "dyadic/summation.hpp"

#include "dyadic/parallel.hpp"

#include <cmath>

namespace dyadic
{
    namespace
    {
        /// coeffs(p_1,...,p_d) *= Π_i multipliers[i](p_i), layout as SampledFunction.
        void apply_separable(Eigen::ArrayXd &coeffs, std::span<const int> ranks,
                             std::span<const Eigen::ArrayXd> multipliers)
        {
            const Index total = coeffs.size();
            Index inner = total;
            for (std::size_t axis = 0; axis < ranks.size(); ++axis)
            {
                const Index length = Index{1} << ranks[axis];
                inner /= length;
                const Eigen::ArrayXd &mult = multipliers[axis];
                for (Index flat = 0; flat < total; ++flat)
                    coeffs(flat) *= mult((flat / inner) % length);
            }
        }

        /// Paley-indexed 0/1 mask of the ψ-frequencies below k, at rank m.
        Eigen::ArrayXd prefix_mask(Index k, SystemKind s, int m)
        {
            const Index size = Index{1} << m;
            Eigen::ArrayXd mask = Eigen::ArrayXd::Zero(size);
            for (Index j = 0; j < std::min(k, size); ++j)
                mask(static_cast<Index>(paley_index(s, static_cast<std::uint64_t>(j)))) = 1.0;
            return mask;
        }

        void check_params(const MeanParams &p, int dims)
        {
            require(static_cast<int>(p.n.size()) == dims, "MeanParams: index dimension mismatch");
            require(static_cast<int>(p.alpha.size()) == dims, "MeanParams: order dimension mismatch");
        }
    }

    SampledFunction partial_sum(const SampledFunction &f, std::span<const Index> k, SystemKind s)
    {
        require(static_cast<int>(k.size()) == f.dims(), "partial_sum: index dimension mismatch");
        std::vector<Eigen::ArrayXd> masks;
        for (int i = 0; i < f.dims(); ++i)
        {
            require(k[i] >= 0 && k[i] <= f.extent(i), "partial_sum: index exceeds 2^m");
            masks.push_back(prefix_mask(k[i], s, f.rank(i)));
        }
        Spectrum spec = fwht(f);
        apply_separable(spec.coeffs, spec.ranks, masks);
        return inverse_fwht(spec);
    }

    SampledFunction cesaro_mean(const Spectrum &paley, const MeanParams &p)
    {
        require(paley.system == SystemKind::Paley, "cesaro_mean: expects a Paley spectrum");
        check_params(p, static_cast<int>(paley.ranks.size()));
        std::vector<Eigen::ArrayXd> kernels;
        for (std::size_t i = 0; i < p.n.size(); ++i)
            kernels.push_back(cesaro_kernel_spectrum(p.n[i], p.alpha[i], p.system, paley.ranks[i]));
        Spectrum product = paley;
        apply_separable(product.coeffs, product.ranks, kernels);
        return inverse_fwht(product);
    }

    SampledFunction cesaro_mean(const SampledFunction &f, const MeanParams &p)
    {
        return cesaro_mean(fwht(f), p);
    }

    MaximalField maximal_over(const SampledFunction &f, std::span<const MeanParams> family, int threads)
    {
        require(!family.empty(), "maximal_over: empty family");
        const Spectrum paley = fwht(f);
        const int workers = static_cast<int>(std::min<Index>(resolve_threads(threads), static_cast<Index>(family.size())));
        std::vector<Eigen::ArrayXd> partial(static_cast<std::size_t>(workers), Eigen::ArrayXd::Zero(f.size()));
        parallel_chunks(0, static_cast<Index>(family.size()), workers, [&](int w, Index lo, Index hi)
                        {
            auto &acc = partial[static_cast<std::size_t>(w)];
            for (Index i = lo; i < hi; ++i)
                acc = acc.max(cesaro_mean(paley, family[static_cast<std::size_t>(i)]).values().abs()); });
        // max is exact, so the result does not depend on the chunking
        Eigen::ArrayXd out = partial.front();
        for (std::size_t w = 1; w < partial.size(); ++w)
            out = out.max(partial[w]);
        return {SampledFunction(f.ranks(), std::move(out)), family.size()};
    }

    MaximalField combine(const MaximalField &a, const MaximalField &b)
    {
        require(a.values.ranks() == b.values.ranks(), "combine: grid mismatch");
        return {SampledFunction(a.values.ranks(), a.values.values().max(b.values.values())),
                a.family_size + b.family_size};
    }

    SampledFunction martingale_maximal(const SampledFunction &f, std::span<const std::vector<int>> nbar_seq)
    {
        Eigen::ArrayXd sup = Eigen::ArrayXd::Zero(f.size());
        const Spectrum paley = fwht(f);
        for (const auto &nbar : nbar_seq)
        {
            require(static_cast<int>(nbar.size()) == f.dims(), "martingale_maximal: index dimension mismatch");
            std::vector<Eigen::ArrayXd> masks;
            for (int i = 0; i < f.dims(); ++i)
            {
                require(nbar[static_cast<std::size_t>(i)] >= 0, "martingale_maximal: negative order");
                const int level = std::min(nbar[static_cast<std::size_t>(i)], f.rank(i));
                masks.push_back(prefix_mask(Index{1} << level, SystemKind::Paley, f.rank(i)));
            }
            Spectrum s = paley;
            apply_separable(s.coeffs, s.ranks, masks);
            sup = sup.max(inverse_fwht(s).values().abs());
        }
        return SampledFunction(f.ranks(), std::move(sup));
    }

    double hardy_norm(const SampledFunction &f, double p, std::span<const std::vector<int>> nbar_seq)
    {
        return lp_norm(martingale_maximal(f, nbar_seq), p);
    }

    double Rectangle::measure() const
    {
        double mu = 1.0;
        for (const auto &side : sides)
            mu *= side.measure();
        return mu;
    }

    bool Rectangle::contains(std::span<const Index> cell, std::span<const int> ranks) const
    {
        for (std::size_t i = 0; i < sides.size(); ++i)
            if (!sides[i].contains(GroupPoint(static_cast<std::uint64_t>(cell[i]), ranks[i])))
                return false;
        return true;
    }

    bool atom_validate(const SampledFunction &a, const Rectangle &I, double p)
    {
        require(p > 0.0, "atom_validate: p must be positive");
        require(static_cast<int>(I.sides.size()) == a.dims(), "atom_validate: rectangle dimension mismatch");
        for (int i = 0; i < a.dims(); ++i)
            require(I.sides[static_cast<std::size_t>(i)].rank <= a.rank(i), "atom_validate: rectangle finer than grid");

        const int d = a.dims();
        std::vector<Index> cell(static_cast<std::size_t>(d), 0);
        for (Index flat = 0; flat < a.size(); ++flat)
        {
            Index rem = flat;
            for (int i = d; i-- > 0;)
            {
                cell[static_cast<std::size_t>(i)] = rem % a.extent(i);
                rem /= a.extent(i);
            }
            if (a.values()(flat) != 0.0 && !I.contains(cell, a.ranks()))
                return false;
        }
        const double bound = std::pow(I.measure(), -1.0 / p);
        const double sup = lp_norm(a, kInfinity);
        if (sup > bound * (1.0 + 1e-12))
            return false;
        return std::abs(integrate(a)) <= 1e-12 * std::max(1.0, sup * I.measure());
    }
}
