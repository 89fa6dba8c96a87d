#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstdint>
#include <thread>
#include <vector>

namespace hcube {

/// Worker cap: HCJ_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("HCJ_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(block_index, begin, end) over a static partition of [0, count).
/// The partition depends only on `count` and the worker cap, never on timing,
/// so per-block results can be merged in block order for deterministic output.
template <typename Fn>
void parallel_blocks(std::uint64_t count, Fn&& fn) {
    const unsigned workers = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(count, 1));
    if (workers <= 1 || count <= 1) {
        fn(0u, std::uint64_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = std::min<std::uint64_t>(count, w * chunk);
        const std::uint64_t hi = std::min<std::uint64_t>(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hcube
