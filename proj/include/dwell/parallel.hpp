#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace dwell {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// Generator for one trajectory. The stream depends only on (master seed,
/// index, tag), so results do not change with how work is scheduled.
inline std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t index,
                                 std::uint64_t tag = 0)
{
    std::uint64_t s = master_seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
    s ^= 0x8CB92BA72F3D8DD7ULL * (tag + 1);
    std::vector<std::uint32_t> words(8);
    for (std::size_t i = 0; i < words.size(); i += 2) {
        const std::uint64_t v = detail::splitmix64(s);
        words[i] = static_cast<std::uint32_t>(v);
        words[i + 1] = static_cast<std::uint32_t>(v >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

inline unsigned resolve_threads(unsigned hint)
{
    if (hint != 0) return hint;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; callers store per-index results and reduce them in
/// index order. The first exception thrown by any task is rethrown.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f)
{
    threads = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace dwell
