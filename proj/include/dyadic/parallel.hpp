#pragma once

#include "dyadic/core.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dyadic
{
    /// Thread count to use when the caller asks for "all cores" (<= 0).
    inline int resolve_threads(int requested)
    {
        if (requested > 0)
            return requested;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /// Runs body(worker, begin, end) over contiguous static chunks of [begin, end).
    /// Chunk boundaries depend only on the thread count; callers that need
    /// thread-count independent results must combine with exact operations.
    template <typename Body>
    void parallel_chunks(Index begin, Index end, int threads, Body &&body)
    {
        const Index count = end - begin;
        if (count <= 0)
            return;
        const int workers = static_cast<int>(std::min<Index>(resolve_threads(threads), count));
        if (workers == 1)
        {
            body(0, begin, end);
            return;
        }
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
        {
            const Index lo = begin + count * w / workers;
            const Index hi = begin + count * (w + 1) / workers;
            pool.emplace_back([&, w, lo, hi]
                              {
                try
                {
                    body(w, lo, hi);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                } });
        }
        for (auto &t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    /// Independent per-index work; body(i) must only write slot i of its output.
    template <typename Body>
    void parallel_for(Index begin, Index end, int threads, Body &&body)
    {
        parallel_chunks(begin, end, threads, [&](int, Index lo, Index hi)
                        {
            for (Index i = lo; i < hi; ++i)
                body(i); });
    }
}
