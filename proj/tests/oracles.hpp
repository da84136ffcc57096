#pragma once

// Test-only oracles, kept independent of the library code paths they check:
// correlators by direct enumeration, reconstruction by the literal double sum,
// and small dense linear algebra.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "bornlab/rng.hpp"

namespace oracle {

inline int parity(std::uint64_t v) {
    int p = 0;
    while (v) {
        p ^= 1;
        v &= v - 1;
    }
    return p;
}

// <Z_subset> by direct enumeration; subset in qubit space (bit q-1 = qubit q),
// x in basis-index space (qubit 1 = MSB)
inline double correlator(const std::vector<double>& probs, int n, std::uint64_t subset) {
    double s = 0.0;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        int par = 0;
        for (int q = 1; q <= n; ++q)
            if ((subset >> (q - 1)) & 1) par ^= static_cast<int>((x >> (n - q)) & 1);
        s += par ? -probs[x] : probs[x];
    }
    return s;
}

// Pr(x) = 2^-n sum over subsets of order <= k, by the literal double sum
inline std::vector<double> truncated_reconstruction(const std::vector<double>& probs,
                                                    int n, int k) {
    const std::size_t N = std::size_t{1} << n;
    std::vector<double> out(N, 0.0);
    for (std::size_t x = 0; x < N; ++x) {
        double acc = 0.0;
        for (std::uint64_t sub = 0; sub < N; ++sub) {
            int order = 0;
            for (int q = 0; q < n; ++q) order += static_cast<int>((sub >> q) & 1);
            if (order > k) continue;
            int par = 0;
            for (int q = 1; q <= n; ++q)
                if ((sub >> (q - 1)) & 1) par ^= static_cast<int>((x >> (n - q)) & 1);
            acc += (par ? -1.0 : 1.0) * correlator(probs, n, sub);
        }
        out[x] = acc / static_cast<double>(N);
    }
    return out;
}

// random distribution on 2^n outcomes
inline std::vector<double> random_distribution(int n, bornlab::Rng& rng) {
    std::vector<double> p(std::size_t{1} << n);
    double tot = 0.0;
    for (auto& v : p) {
        v = rng.uniform();
        tot += v;
    }
    for (auto& v : p) v /= tot;
    return p;
}

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace oracle
