#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadic
{
    using Index = std::int64_t;

    /// Raised when an operation is called outside its precondition.
    class ContractViolation : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    inline void require(bool condition, const char *what)
    {
        if (!condition)
            throw ContractViolation(what);
    }

    /// Largest resolution a GroupPoint can carry (one machine word).
    inline constexpr int kMaxResolution = 63;

    /// Sentinel exponent for the sup norm.
    inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

    /// Element of the Walsh group truncated to `resolution` coordinates.
    /// Bit k of `bits` holds the coordinate x_k.
    struct GroupPoint
    {
        std::uint64_t bits = 0;
        int resolution = 0;

        GroupPoint() = default;
        GroupPoint(std::uint64_t bits_, int resolution_);

        static GroupPoint from_coordinates(std::span<const int> coords);
        /// e_n: the point whose only nonzero coordinate is n.
        static GroupPoint unit(int n, int resolution);

        int coordinate(int k) const;
        std::vector<int> coordinates() const;

        friend bool operator==(const GroupPoint &, const GroupPoint &) = default;
    };

    GroupPoint xor_add(const GroupPoint &x, const GroupPoint &y);

    /// Reverses the order of the lowest `width` bits of v, keeping the rest.
    constexpr std::uint64_t reverse_low_bits(std::uint64_t v, int width)
    {
        if (width <= 0)
            return v;
        std::uint64_t r = v;
        r = ((r >> 1) & 0x5555555555555555ull) | ((r & 0x5555555555555555ull) << 1);
        r = ((r >> 2) & 0x3333333333333333ull) | ((r & 0x3333333333333333ull) << 2);
        r = ((r >> 4) & 0x0F0F0F0F0F0F0F0Full) | ((r & 0x0F0F0F0F0F0F0F0Full) << 4);
        r = ((r >> 8) & 0x00FF00FF00FF00FFull) | ((r & 0x00FF00FF00FF00FFull) << 8);
        r = ((r >> 16) & 0x0000FFFF0000FFFFull) | ((r & 0x0000FFFF0000FFFFull) << 16);
        r = (r >> 32) | (r << 32);
        const std::uint64_t low = r >> (64 - width);
        const std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
        return (v & ~mask) | low;
    }

    /// Reverses the first A coordinates: (x_{A-1},...,x_0,x_A,x_{A+1},...).
    GroupPoint tau(const GroupPoint &x, int A);

    /// I_rank(anchor): points agreeing with the anchor in the first `rank` coordinates.
    struct DyadicInterval
    {
        GroupPoint anchor;
        int rank = 0;

        DyadicInterval(GroupPoint anchor_, int rank_);

        double measure() const;
        bool contains(const GroupPoint &y) const;
    };

    /// A function on G^d constant on products of rank-m_i cosets.
    ///
    /// Cell (j_1,...,j_d) holds the value on the product of cosets whose first
    /// m_i coordinates are the bits of j_i. Storage is flat, row-major, with
    /// dimension 1 varying slowest.
    class SampledFunction
    {
    public:
        SampledFunction() = default;
        explicit SampledFunction(std::vector<int> ranks, double fill = 0.0);
        SampledFunction(std::vector<int> ranks, Eigen::ArrayXd values);

        static SampledFunction constant(std::vector<int> ranks, double c);
        /// 1-D function sampled from an evaluator on GroupPoints of the given rank.
        template <typename F>
        static SampledFunction sample(int rank, F &&f)
        {
            SampledFunction out({rank});
            const Index n = out.size();
            for (Index j = 0; j < n; ++j)
                out.values_(j) = static_cast<double>(f(GroupPoint(static_cast<std::uint64_t>(j), rank)));
            return out;
        }

        int dims() const { return static_cast<int>(ranks_.size()); }
        const std::vector<int> &ranks() const { return ranks_; }
        int rank(int dim) const { return ranks_.at(static_cast<std::size_t>(dim)); }
        Index extent(int dim) const { return Index{1} << rank(dim); }
        Index size() const { return values_.size(); }

        const Eigen::ArrayXd &values() const { return values_; }
        Eigen::ArrayXd &values() { return values_; }

        /// Flat offset of a multi-index.
        Index offset(std::span<const Index> cell) const;
        double operator()(std::span<const Index> cell) const { return values_(offset(cell)); }
        double &operator()(std::span<const Index> cell) { return values_(offset(cell)); }

        /// Tensor product of 1-D factors, factor i living on dimension i.
        static SampledFunction tensor(std::span<const SampledFunction> factors);

    private:
        std::vector<int> ranks_;
        Eigen::ArrayXd values_;
    };

    /// Fixed-order tree summation; bit-identical on every call.
    double pairwise_sum(std::span<const double> v);

    double integrate(const SampledFunction &f);

    /// (∫|f|^p)^{1/p} for finite p > 0, grid max of |f| for p = kInfinity.
    double lp_norm(const SampledFunction &f, double p);

    /// Indicator of I_n(anchor) sampled at `rank` (1-D).
    SampledFunction indicator(const DyadicInterval &interval, int rank);

    /// Shortest round-trip decimal form, '.' separator regardless of locale.
    std::string format_double(double v);

    /// f ∘ τ_A for a 1-D function.
    SampledFunction compose_tau(const SampledFunction &f, int A);
}
