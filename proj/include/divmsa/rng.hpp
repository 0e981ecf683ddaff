#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <unordered_set>
#include <vector>

namespace divmsa {

/// splitmix64 finalizer; used to derive well-mixed child seeds from a global
/// seed plus per-node salt so results do not depend on work scheduling.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t salt) {
    return mix_seed(seed ^ mix_seed(salt));
}

/// Uniform draw in [0, bound) by rejection, so the stream is identical on
/// every platform (std::uniform_int_distribution is not portable).
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

/// Floyd's algorithm: k distinct values from [0, n), returned sorted.
/// k > n collapses to "all of [0, n)".
inline std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng,
                                                  std::uint64_t n,
                                                  std::uint64_t k) {
    std::vector<std::uint64_t> out;
    if (k >= n) {
        out.resize(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            out[i] = i;
        }
        return out;
    }
    std::unordered_set<std::uint64_t> picked;
    picked.reserve(k * 2);
    for (std::uint64_t j = n - k; j < n; ++j) {
        const std::uint64_t t = bounded_draw(rng, j + 1);
        picked.insert(picked.contains(t) ? j : t);
    }
    out.assign(picked.begin(), picked.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace divmsa
