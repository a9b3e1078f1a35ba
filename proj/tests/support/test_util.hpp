#pragma once

// Shared helpers for the test suites: a deterministic generator (so every
// "random" case is reproducible from a literal seed) and small field oracles
// written independently of the library loops they check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "unshade/grid.hpp"

namespace testutil {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

inline unshade::GridField random_field(int rows, int cols, double h, double lo, double hi,
                                       std::uint64_t seed) {
    SplitMix64 rng(seed);
    unshade::GridField f(rows, cols, h);
    for (double& v : f.values()) v = rng.uniform(lo, hi);
    return f;
}

// Values of the form k/256 with k in [0, 256); exact dyadic rationals.
inline unshade::GridField random_dyadic_field(int rows, int cols, double h, std::uint64_t seed) {
    SplitMix64 rng(seed);
    unshade::GridField f(rows, cols, h);
    for (double& v : f.values()) v = static_cast<double>(rng.next() % 256) / 256.0;
    return f;
}

inline double max_abs_diff(const unshade::GridField& a, const unshade::GridField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::abs(a.values()[k] - b.values()[k]);
        if (d > m) m = d;
    }
    return m;
}

inline bool bitwise_equal(const unshade::GridField& a, const unshade::GridField& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a.values()[k] != b.values()[k]) return false;
    }
    return true;
}

}  // namespace testutil
