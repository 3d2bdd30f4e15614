#include "dyadic/core.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

namespace dyadic
{
    GroupPoint::GroupPoint(std::uint64_t bits_, int resolution_)
        : bits(bits_), resolution(resolution_)
    {
        require(resolution >= 0 && resolution <= kMaxResolution, "GroupPoint: resolution out of range");
        require((bits >> resolution) == 0, "GroupPoint: bits beyond resolution");
    }

    GroupPoint GroupPoint::from_coordinates(std::span<const int> coords)
    {
        require(coords.size() <= static_cast<std::size_t>(kMaxResolution), "GroupPoint: too many coordinates");
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < coords.size(); ++k)
        {
            require(coords[k] == 0 || coords[k] == 1, "GroupPoint: coordinate must be 0 or 1");
            bits |= static_cast<std::uint64_t>(coords[k]) << k;
        }
        return GroupPoint(bits, static_cast<int>(coords.size()));
    }

    GroupPoint GroupPoint::unit(int n, int resolution)
    {
        require(n >= 0 && n < resolution, "GroupPoint::unit: index beyond resolution");
        return GroupPoint(std::uint64_t{1} << n, resolution);
    }

    int GroupPoint::coordinate(int k) const
    {
        require(k >= 0 && k < resolution, "GroupPoint: coordinate index out of range");
        return static_cast<int>((bits >> k) & 1u);
    }

    std::vector<int> GroupPoint::coordinates() const
    {
        std::vector<int> out(static_cast<std::size_t>(resolution));
        for (int k = 0; k < resolution; ++k)
            out[static_cast<std::size_t>(k)] = coordinate(k);
        return out;
    }

    GroupPoint xor_add(const GroupPoint &x, const GroupPoint &y)
    {
        require(x.resolution == y.resolution, "xor_add: resolution mismatch");
        return GroupPoint(x.bits ^ y.bits, x.resolution);
    }

    GroupPoint tau(const GroupPoint &x, int A)
    {
        require(A >= 0 && A <= x.resolution, "tau: A exceeds resolution");
        return GroupPoint(reverse_low_bits(x.bits, A), x.resolution);
    }

    DyadicInterval::DyadicInterval(GroupPoint anchor_, int rank_)
        : anchor(anchor_), rank(rank_)
    {
        require(rank >= 0 && rank <= anchor.resolution, "DyadicInterval: rank exceeds anchor resolution");
    }

    double DyadicInterval::measure() const { return std::ldexp(1.0, -rank); }

    bool DyadicInterval::contains(const GroupPoint &y) const
    {
        require(y.resolution >= rank, "DyadicInterval::contains: point resolution below rank");
        const std::uint64_t mask = (std::uint64_t{1} << rank) - 1;
        return ((y.bits ^ anchor.bits) & mask) == 0;
    }

    SampledFunction::SampledFunction(std::vector<int> ranks, double fill)
        : ranks_(std::move(ranks))
    {
        require(!ranks_.empty(), "SampledFunction: at least one dimension");
        int total = 0;
        for (int r : ranks_)
        {
            require(r >= 0, "SampledFunction: negative rank");
            total += r;
        }
        require(total <= 40, "SampledFunction: grid too large");
        values_ = Eigen::ArrayXd::Constant(Index{1} << total, fill);
    }

    SampledFunction::SampledFunction(std::vector<int> ranks, Eigen::ArrayXd values)
        : SampledFunction(std::move(ranks))
    {
        require(values.size() == values_.size(), "SampledFunction: value count does not match ranks");
        values_ = std::move(values);
    }

    SampledFunction SampledFunction::constant(std::vector<int> ranks, double c)
    {
        return SampledFunction(std::move(ranks), c);
    }

    Index SampledFunction::offset(std::span<const Index> cell) const
    {
        require(cell.size() == ranks_.size(), "SampledFunction: cell dimension mismatch");
        Index off = 0;
        for (std::size_t i = 0; i < cell.size(); ++i)
        {
            const Index n = Index{1} << ranks_[i];
            require(cell[i] >= 0 && cell[i] < n, "SampledFunction: cell out of range");
            off = off * n + cell[i];
        }
        return off;
    }

    SampledFunction SampledFunction::tensor(std::span<const SampledFunction> factors)
    {
        require(!factors.empty(), "tensor: no factors");
        std::vector<int> ranks;
        for (const auto &f : factors)
        {
            require(f.dims() == 1, "tensor: factors must be one-dimensional");
            ranks.push_back(f.rank(0));
        }
        SampledFunction out(ranks, 1.0);
        // Each factor repeats in blocks of `inner` and tiles with period `inner * n`.
        Index inner = out.size();
        for (const auto &f : factors)
        {
            const Index n = f.size();
            inner /= n;
            for (Index k = 0; k < out.size(); ++k)
                out.values_(k) *= f.values_((k / inner) % n);
        }
        return out;
    }

    namespace
    {
        double pairwise_sum_impl(const double *p, std::size_t n)
        {
            if (n <= 32)
            {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += p[i];
                return s;
            }
            const std::size_t half = n / 2;
            return pairwise_sum_impl(p, half) + pairwise_sum_impl(p + half, n - half);
        }
    }

    double pairwise_sum(std::span<const double> v)
    {
        return pairwise_sum_impl(v.data(), v.size());
    }

    double integrate(const SampledFunction &f)
    {
        const auto &v = f.values();
        return pairwise_sum({v.data(), static_cast<std::size_t>(v.size())}) / static_cast<double>(v.size());
    }

    double lp_norm(const SampledFunction &f, double p)
    {
        require(p > 0.0, "lp_norm: p must be positive");
        if (std::isinf(p))
            return f.values().abs().maxCoeff();
        Eigen::ArrayXd powered = f.values().abs().pow(p);
        const double mean = pairwise_sum({powered.data(), static_cast<std::size_t>(powered.size())}) /
                            static_cast<double>(powered.size());
        return std::pow(mean, 1.0 / p);
    }

    SampledFunction indicator(const DyadicInterval &interval, int rank)
    {
        require(rank >= interval.rank, "indicator: rank below interval rank");
        return SampledFunction::sample(rank, [&](const GroupPoint &x)
                                       { return interval.contains(x) ? 1.0 : 0.0; });
    }

    SampledFunction compose_tau(const SampledFunction &f, int A)
    {
        require(f.dims() == 1, "compose_tau: one-dimensional functions only");
        const int m = f.rank(0);
        require(A >= 0 && A <= m, "compose_tau: A exceeds rank");
        SampledFunction out({m});
        for (Index j = 0; j < f.size(); ++j)
            out.values()(j) = f.values()(static_cast<Index>(reverse_low_bits(static_cast<std::uint64_t>(j), A)));
        return out;
    }

    std::string format_double(double v)
    {
        std::array<char, 64> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    }
}
