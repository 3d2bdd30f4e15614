#pragma once

#include "dyadic/core.hpp"

#include <bit>
#include <string_view>

namespace dyadic
{
    enum class SystemKind
    {
        Paley,
        Kaczmarz
    };

    std::string_view to_string(SystemKind s);
    SystemKind parse_system(std::string_view name);

    /// r_k(x) = (-1)^{x_k}.
    int rademacher(int k, const GroupPoint &x);

    /// w_n(x) = prod_k r_k(x)^{n_k}.
    int walsh_paley(std::uint64_t n, const GroupPoint &x);

    /// |n|: position of the leading binary digit, n >= 1.
    int order(std::uint64_t n);

    /// κ_n(x) = r_{|n|}(x) prod_{k<|n|} r_{|n|-1-k}(x)^{n_k}, κ_0 = 1.
    /// Evaluated from the defining product, not through the permutation.
    int kaczmarz(std::uint64_t n, const GroupPoint &x);

    /// ψ_n(x) for either system.
    int walsh(SystemKind s, std::uint64_t n, const GroupPoint &x);

    /// π with κ_n = w_{π(n)}: reverses the |n| digits below the leading one.
    constexpr std::uint64_t kaczmarz_perm(std::uint64_t n)
    {
        if (n < 2)
            return n;
        const int k = std::bit_width(n) - 1;
        return reverse_low_bits(n, k);
    }

    /// Paley index carrying the n-th function of system s.
    constexpr std::uint64_t paley_index(SystemKind s, std::uint64_t n)
    {
        return s == SystemKind::Kaczmarz ? kaczmarz_perm(n) : n;
    }

    /// Unnormalized radix-2 Walsh-Hadamard butterflies over `length` entries
    /// spaced `stride` apart. Output is in natural (Paley) order.
    template <typename Scalar>
    void fwht_strided(Scalar *data, Index length, Index stride)
    {
        for (Index h = 1; h < length; h *= 2)
            for (Index block = 0; block < length; block += 2 * h)
                for (Index j = block; j < block + h; ++j)
                {
                    Scalar &a = data[j * stride];
                    Scalar &b = data[(j + h) * stride];
                    const Scalar u = a;
                    a = u + b;
                    b = u - b;
                }
    }

    /// In-place unnormalized transform of a dense vector of power-of-two length.
    template <typename Derived>
    void fwht_inplace(Eigen::PlainObjectBase<Derived> &v)
    {
        const Index n = v.size();
        require(n > 0 && std::has_single_bit(static_cast<std::uint64_t>(n)), "fwht: length must be a power of two");
        fwht_strided(v.data(), n, Index{1});
    }

    /// Unnormalized transform along every axis of a row-major grid (axis 0 slowest).
    template <typename Scalar>
    void fwht_grid(Scalar *data, std::span<const int> ranks)
    {
        Index total = 1;
        for (int r : ranks)
            total <<= r;
        Index inner = total;
        for (int r : ranks)
        {
            const Index length = Index{1} << r;
            inner /= length;
            const Index outer = total / (length * inner);
            for (Index o = 0; o < outer; ++o)
                for (Index i = 0; i < inner; ++i)
                    fwht_strided(data + o * length * inner + i, length, inner);
        }
    }

    /// Walsh-Fourier coefficients. `coeffs` shares the grid layout of the
    /// sampled function; entry (n_1,...,n_d) is ∫ f ψ_n in the stated system.
    struct Spectrum
    {
        SystemKind system = SystemKind::Paley;
        std::vector<int> ranks;
        Eigen::ArrayXd coeffs;
    };

    /// Paley spectrum, coeffs[n] = ∫ f w_n dμ.
    Spectrum fwht(const SampledFunction &f);

    /// Σ_n coeffs[n] ψ_n, either ordering.
    SampledFunction inverse_fwht(const Spectrum &s);

    Spectrum fourier_coeffs(const SampledFunction &f, SystemKind s);

    /// Re-indexes a spectrum into the other ordering.
    Spectrum reorder(const Spectrum &s, SystemKind target);

    /// ψ_n sampled at `rank` (1-D).
    SampledFunction sample_walsh(SystemKind s, std::uint64_t n, int rank);
}
