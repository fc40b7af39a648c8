#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace negkb {

// FNV-1a; stable across platforms and runs.
inline std::uint64_t stable_hash(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Derives an independent stream seed from a master seed and a name.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
    std::uint64_t z = master ^ stable_hash(name);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fixed 6-decimal rendering used by every TSV writer.
std::string format_real(double value);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results are written by
// index, so the caller sees the same order for any job count. The first
// exception (lowest index) is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, std::size_t jobs, Fn&& fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return out;
}

}  // namespace negkb
