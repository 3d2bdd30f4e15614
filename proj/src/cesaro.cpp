#include "dyadic/cesaro.hpp"

#include "dyadic/parallel.hpp"

#include <cmath>

namespace dyadic
{
    CesaroOrder::CesaroOrder(double alpha) : alpha_(alpha)
    {
        require(alpha > 0.0 && alpha <= 1.0, "CesaroOrder: alpha must lie in (0, 1]");
    }

    double cesaro_number(Index j, double alpha)
    {
        require(j >= 0, "cesaro_number: negative index");
        require(alpha > -1.0, "cesaro_number: alpha must exceed -1");
        double a = 1.0;
        for (Index i = 1; i <= j; ++i)
            a *= (alpha + static_cast<double>(i)) / static_cast<double>(i);
        return a;
    }

    Eigen::ArrayXd cesaro_numbers(Index jmax, double alpha)
    {
        require(jmax >= 0, "cesaro_numbers: negative index");
        require(alpha > -1.0, "cesaro_numbers: alpha must exceed -1");
        Eigen::ArrayXd a(jmax + 1);
        a(0) = 1.0;
        for (Index i = 1; i <= jmax; ++i)
            a(i) = a(i - 1) * ((alpha + static_cast<double>(i)) / static_cast<double>(i));
        return a;
    }

    int exact_rank(Index N)
    {
        require(N >= 0, "exact_rank: negative index");
        int m = 0;
        while ((Index{1} << m) < N)
            ++m;
        return m;
    }

    namespace
    {
        void check_kernel_args(Index n, int m)
        {
            require(m >= 0 && m <= 30, "kernel: rank out of range");
            require(n >= 0 && n <= (Index{1} << m), "kernel: index exceeds 2^m");
        }

        void add_walsh(Eigen::ArrayXd &acc, SystemKind s, Index k, int m, double weight)
        {
            for (Index j = 0; j < acc.size(); ++j)
                acc(j) += weight * walsh(s, static_cast<std::uint64_t>(k), GroupPoint(static_cast<std::uint64_t>(j), m));
        }
    }

    SampledFunction dirichlet_kernel(Index n, SystemKind s, int m)
    {
        check_kernel_args(n, m);
        SampledFunction out({m});
        for (Index k = 0; k < n; ++k)
            add_walsh(out.values(), s, k, m, 1.0);
        return out;
    }

    SampledFunction cesaro_kernel_definitional(Index N, const CesaroOrder &alpha, SystemKind s, int m)
    {
        check_kernel_args(N, m);
        const Eigen::ArrayXd lower = cesaro_numbers(N, alpha.value() - 1.0);
        const double norm = cesaro_number(N, alpha.value());
        Eigen::ArrayXd dirichlet = Eigen::ArrayXd::Zero(Index{1} << m);
        Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(dirichlet.size());
        // k = 0 contributes D_0 = 0.
        for (Index k = 1; k <= N; ++k)
        {
            add_walsh(dirichlet, s, k - 1, m, 1.0);
            sum += lower(N - k) * dirichlet;
        }
        return SampledFunction({m}, sum / norm);
    }

    Eigen::ArrayXd cesaro_kernel_spectrum(Index N, const Eigen::ArrayXd &table, SystemKind s, int m)
    {
        require(N >= 0 && N < table.size(), "cesaro_kernel_spectrum: table too short");
        require(m >= 0 && m <= 30, "cesaro_kernel_spectrum: rank out of range");
        const Index size = Index{1} << m;
        Eigen::ArrayXd spec = Eigen::ArrayXd::Zero(size);
        const Index top = std::min(N, size);
        const double norm = table(N);
        for (Index j = 0; j < top; ++j)
            spec(static_cast<Index>(paley_index(s, static_cast<std::uint64_t>(j)))) = table(N - 1 - j) / norm;
        return spec;
    }

    Eigen::ArrayXd cesaro_kernel_spectrum(Index N, const CesaroOrder &alpha, SystemKind s, int m)
    {
        require(N >= 0, "cesaro_kernel_spectrum: negative index");
        require(m >= 0 && m <= 30, "cesaro_kernel_spectrum: rank out of range");
        const Index size = Index{1} << m;
        const Index top = std::min(N, size);
        // window(i) = A_{first+i}^α, i = 0..top; only the tail of the table is kept
        const Index first = N - top;
        Eigen::ArrayXd window(top + 1);
        double a = 1.0;
        for (Index i = 1; i <= N; ++i)
        {
            if (i - 1 >= first)
                window(i - 1 - first) = a;
            a *= (alpha.value() + static_cast<double>(i)) / static_cast<double>(i);
        }
        window(top) = a;
        Eigen::ArrayXd spec = Eigen::ArrayXd::Zero(size);
        for (Index j = 0; j < top; ++j)
            spec(static_cast<Index>(paley_index(s, static_cast<std::uint64_t>(j)))) = window(N - 1 - j - first) / a;
        return spec;
    }

    SampledFunction cesaro_kernel_spectral(Index N, const CesaroOrder &alpha, SystemKind s, int m)
    {
        check_kernel_args(N, m);
        Eigen::ArrayXd values = cesaro_kernel_spectrum(N, alpha, s, m);
        fwht_inplace(values);
        return SampledFunction({m}, std::move(values));
    }

    double cesaro_kernel_at(Index N, const CesaroOrder &alpha, SystemKind s, const GroupPoint &x)
    {
        require(N >= 0, "cesaro_kernel_at: negative index");
        require(N <= (Index{1} << x.resolution), "cesaro_kernel_at: index exceeds point resolution");
        const Eigen::ArrayXd table = cesaro_numbers(N, alpha.value());
        double sum = 0.0;
        for (Index j = 0; j < N; ++j)
            sum += table(N - 1 - j) * walsh(s, static_cast<std::uint64_t>(j), x);
        return sum / table(N);
    }

    std::vector<double> KernelTable::block_maxima() const
    {
        std::vector<double> out;
        for (Index N = 1; N <= max_n; ++N)
        {
            const auto block = static_cast<std::size_t>(order(static_cast<std::uint64_t>(N)));
            if (out.size() <= block)
                out.resize(block + 1, 0.0);
            out[block] = std::max(out[block], norms[static_cast<std::size_t>(N - 1)]);
        }
        return out;
    }

    KernelTable kernel_norm_survey(SystemKind s, const CesaroOrder &alpha, Index max_n, int m, int threads)
    {
        require(max_n >= 1, "kernel_norm_survey: max_n must be positive");
        check_kernel_args(max_n, m);
        const Eigen::ArrayXd table = cesaro_numbers(max_n, alpha.value());
        KernelTable out{s, alpha, max_n, std::vector<double>(static_cast<std::size_t>(max_n))};
        parallel_for(1, max_n + 1, threads, [&](Index N)
                     {
            Eigen::ArrayXd k = cesaro_kernel_spectrum(N, table, s, m);
            fwht_inplace(k);
            out.norms[static_cast<std::size_t>(N - 1)] = lp_norm(SampledFunction({m}, std::move(k)), 1.0); });
        return out;
    }
}
