#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gac {

// worker cap from GAC_THREADS; 0 or unset means hardware concurrency
inline unsigned thread_budget() {
    static const unsigned cached = [] {
        unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const char* env = std::getenv("GAC_THREADS");
        if (!env || !*env) return hw;
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || v < 0) return hw;
        if (v == 0) return hw;
        return std::min(256u, static_cast<unsigned>(v));
    }();
    return cached;
}

// runs body(begin, end) over a partition of [0, n); each worker owns a
// disjoint index range, so writes keyed by index stay deterministic
template <class Body>
void parallel_chunks(std::size_t n, Body&& body) {
    const unsigned workers = thread_budget();
    if (n == 0) return;
    if (workers <= 1 || n < 4096) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t parts = std::min<std::size_t>(workers, n);
    const std::size_t chunk = (n + parts - 1) / parts;
    std::vector<std::thread> pool;
    pool.reserve(parts - 1);
    std::exception_ptr err;
    std::mutex err_mu;
    auto run = [&](std::size_t b, std::size_t e) {
        try {
            body(b, e);
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!err) err = std::current_exception();
        }
    };
    for (std::size_t p = 1; p < parts; ++p) {
        const std::size_t b = p * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(run, b, e);
    }
    run(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    parallel_chunks(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) fn(i);
    });
}

} // namespace gac
