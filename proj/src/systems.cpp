#include "dyadic/systems.hpp"

namespace dyadic
{
    std::string_view to_string(SystemKind s)
    {
        return s == SystemKind::Paley ? "paley" : "kaczmarz";
    }

    SystemKind parse_system(std::string_view name)
    {
        if (name == "paley" || name == "walsh" || name == "w")
            return SystemKind::Paley;
        if (name == "kaczmarz" || name == "k")
            return SystemKind::Kaczmarz;
        throw ContractViolation("unknown system: " + std::string(name));
    }

    int rademacher(int k, const GroupPoint &x)
    {
        return x.coordinate(k) ? -1 : 1;
    }

    int walsh_paley(std::uint64_t n, const GroupPoint &x)
    {
        require(x.resolution >= 64 || (n >> x.resolution) == 0, "walsh_paley: index too large for resolution");
        return std::popcount(n & x.bits) & 1 ? -1 : 1;
    }

    int order(std::uint64_t n)
    {
        require(n >= 1, "order: |0| is undefined");
        return std::bit_width(n) - 1;
    }

    int kaczmarz(std::uint64_t n, const GroupPoint &x)
    {
        require(x.resolution >= 64 || (n >> x.resolution) == 0, "kaczmarz: index too large for resolution");
        if (n == 0)
            return 1;
        // r_{|n|}(x) Π_{k<|n|} r_{|n|-1-k}(x)^{n_k}
        const int top = order(n);
        std::uint64_t parity = (x.bits >> top) & 1u;
        for (int k = 0; k < top; ++k)
            parity ^= (n >> k) & (x.bits >> (top - 1 - k)) & 1u;
        return parity ? -1 : 1;
    }

    int walsh(SystemKind s, std::uint64_t n, const GroupPoint &x)
    {
        return s == SystemKind::Paley ? walsh_paley(n, x) : kaczmarz(n, x);
    }

    Spectrum fwht(const SampledFunction &f)
    {
        Spectrum out{SystemKind::Paley, f.ranks(), f.values()};
        fwht_grid(out.coeffs.data(), std::span<const int>(out.ranks));
        out.coeffs /= static_cast<double>(out.coeffs.size());
        return out;
    }

    Spectrum reorder(const Spectrum &s, SystemKind target)
    {
        if (s.system == target)
            return s;
        // π is an involution, so the same gather maps either direction.
        Spectrum out{target, s.ranks, Eigen::ArrayXd(s.coeffs.size())};
        const std::size_t d = s.ranks.size();
        std::vector<std::vector<Index>> perm(d);
        std::vector<int> shift(d, 0);
        for (std::size_t i = d; i-- > 0;)
        {
            const Index n = Index{1} << s.ranks[i];
            perm[i].resize(static_cast<std::size_t>(n));
            for (Index c = 0; c < n; ++c)
                perm[i][static_cast<std::size_t>(c)] = static_cast<Index>(kaczmarz_perm(static_cast<std::uint64_t>(c)));
            if (i + 1 < d)
                shift[i] = shift[i + 1] + s.ranks[i + 1];
        }
        for (Index flat = 0; flat < s.coeffs.size(); ++flat)
        {
            Index src = 0;
            for (std::size_t i = 0; i < d; ++i)
            {
                const Index cell = (flat >> shift[i]) & ((Index{1} << s.ranks[i]) - 1);
                src |= perm[i][static_cast<std::size_t>(cell)] << shift[i];
            }
            out.coeffs(flat) = s.coeffs(src);
        }
        return out;
    }

    SampledFunction inverse_fwht(const Spectrum &s)
    {
        Spectrum paley = reorder(s, SystemKind::Paley);
        fwht_grid(paley.coeffs.data(), std::span<const int>(paley.ranks));
        return SampledFunction(paley.ranks, std::move(paley.coeffs));
    }

    Spectrum fourier_coeffs(const SampledFunction &f, SystemKind s)
    {
        return reorder(fwht(f), s);
    }

    SampledFunction sample_walsh(SystemKind s, std::uint64_t n, int rank)
    {
        return SampledFunction::sample(rank, [&](const GroupPoint &x)
                                       { return walsh(s, n, x); });
    }
}
