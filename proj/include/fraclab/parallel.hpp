#pragma once

// Deterministic work sharing.  All reductions partition the index range into
// chunks whose boundaries depend only on the problem size, accumulate each
// chunk in fixed index order, and combine chunk results with a fixed-shape
// pairwise tree.  The worker count therefore changes *which thread* runs a
// chunk but never the floating-point result: reports are byte-identical
// across 1, 4, 8, ... workers.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fraclab {

namespace detail {
inline int& worker_count_ref() {
    static int n = []() {
        unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : static_cast<int>(hc > 8 ? 8 : hc);
    }();
    return n;
}
} // namespace detail

inline void set_workers(int n) { detail::worker_count_ref() = n < 1 ? 1 : n; }
[[nodiscard]] inline int workers() { return detail::worker_count_ref(); }

// Pairwise (tree) sum with bracketing fixed by the vector layout.
[[nodiscard]] inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t m = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2) v[m++] = v[i] + v[i + 1];
        if (n % 2) v[m++] = v[n - 1];
        n = m;
    }
    return v[0];
}

// Chunk layout as a pure function of the range size.
[[nodiscard]] inline std::int64_t chunk_count(std::int64_t total) {
    const std::int64_t cap = 512;
    return total < cap ? (total > 0 ? total : 1) : cap;
}

namespace detail {

// Runs `work` on the pool, captures the first exception thrown by any worker,
// and rethrows it on the calling thread after all workers have joined.
template <class Work>
inline void run_pool(Work&& work) {
    std::exception_ptr err;
    std::mutex err_mu;
    std::atomic<bool> bail{false};
    auto guarded = [&]() {
        try {
            work(bail);
        } catch (...) {
            {
                const std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
            bail.store(true, std::memory_order_relaxed);
        }
    };
    const int nw = workers();
    if (nw <= 1) {
        guarded();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int i = 0; i < nw; ++i) pool.emplace_back(guarded);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
}

} // namespace detail

// parallel_reduce_sum: fn(begin, end) -> partial sum over [begin, end).
template <class Fn>
[[nodiscard]] double parallel_reduce_sum(std::int64_t total, Fn&& fn) {
    if (total <= 0) return 0.0;
    const std::int64_t nchunks = chunk_count(total);
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
    std::atomic<std::int64_t> next{0};
    detail::run_pool([&](std::atomic<bool>& bail) {
        for (;;) {
            if (bail.load(std::memory_order_relaxed)) return;
            const std::int64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            const std::int64_t b = c * total / nchunks;
            const std::int64_t e = (c + 1) * total / nchunks;
            partial[static_cast<std::size_t>(c)] = fn(b, e);
        }
    });
    return pairwise_sum(std::move(partial));
}

// parallel_for: fn(i) for each i; results must be written to disjoint slots.
template <class Fn>
void parallel_for(std::int64_t total, Fn&& fn) {
    if (total <= 0) return;
    std::atomic<std::int64_t> next{0};
    detail::run_pool([&](std::atomic<bool>& bail) {
        for (;;) {
            if (bail.load(std::memory_order_relaxed)) return;
            const std::int64_t i = next.fetch_add(1);
            if (i >= total) return;
            fn(i);
        }
    });
}

} // namespace fraclab
