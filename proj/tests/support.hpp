#pragma once

// Independent oracles shared by the test binaries. They use plain integer
// arithmetic and explicit loops, never the library's lift or solver code.

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "dwline/dwline.hpp"

namespace oracle {

inline long long mod(long long v, long long n) { return ((v % n) + n) % n; }

/// alpha_cyclic(n, N)(j, k, l) in units of 1/n.
inline long long alpha_units(long long n, long long N, long long j, long long k, long long l) {
    j = mod(j, n), k = mod(k, n), l = mod(l, n);
    return k + l >= n ? mod(N * j, n) : 0;
}

/// The one-generator lift on Z/n for rep (1, 0), evaluated by its defining loop,
/// in units of 1/n: sum_{j<m} alpha(1, j, z) for m >= 0.
inline long long explicit_gamma_units(long long n, long long N, long long m, long long z) {
    long long s = 0;
    if (m >= 0)
        for (long long j = 0; j < m; ++j) s += alpha_units(n, N, 1, j, z);
    else
        for (long long j = 1; j <= -m; ++j) s -= alpha_units(n, N, 1, -j, z);
    return mod(s, n);
}

/// Number of tuples (g1,h1,...,gk,hk) with prod [gi,hi] = 1, by direct table lookups.
inline std::size_t count_surface_reps(const std::vector<std::vector<std::size_t>>& t, std::size_t genus) {
    const std::size_t n = t.size();
    std::vector<std::size_t> inv(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (t[x][y] == 0) inv[x] = y;
    auto comm = [&](std::size_t x, std::size_t y) { return t[t[t[x][y]][inv[x]]][inv[y]]; };
    std::size_t count = 0;
    if (genus == 1) {
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t h = 0; h < n; ++h) count += comm(g, h) == 0;
    } else {
        std::vector<std::size_t> hist(n, 0);
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t h = 0; h < n; ++h) ++hist[comm(g, h)];
        // [g1,h1][g2,h2] = 1 iff [g2,h2] = [g1,h1]^-1.
        for (std::size_t c = 0; c < n; ++c) count += hist[c] * hist[inv[c]];
    }
    return count;
}

/// Number of rep orbits on Z/n (abelian, so every rep is its own orbit) whose
/// conjugation character vanishes for every z, evaluating the gauge correction
/// term by term with alpha_cyclic(n, N):
///   R((g,h), z) = beta(g,h) - beta(h,g),
///   beta(x,y) = alpha(z,x,y) + alpha(x,y,z) - alpha(x,z,y).
inline std::size_t cyclic_sections(long long n, long long N) {
    std::size_t count = 0;
    for (long long g = 0; g < n; ++g)
        for (long long h = 0; h < n; ++h) {
            bool trivial = true;
            for (long long z = 0; z < n; ++z) {
                auto beta = [&](long long x, long long y) {
                    return alpha_units(n, N, z, x, y) + alpha_units(n, N, x, y, z) - alpha_units(n, N, x, z, y);
                };
                if (mod(beta(g, h) - beta(h, g), n) != 0) trivial = false;
            }
            count += trivial;
        }
    return count;
}

/// A pseudo-random element of Gamma_1(n) with entries bounded by `bound`.
inline dwline::SL2Z random_gamma1(std::mt19937_64& rng, long long n, long long bound) {
    std::uniform_int_distribution<long long> d(-bound, bound);
    for (;;) {
        const long long a = d(rng), b = d(rng);
        if (mod(a - 1, n) != 0 || mod(b, n) != 0 || std::gcd(a, b) != 1) continue;
        // Extended Euclid: a*x + b*y = 1, then (c, d) = (-y, x) up to adding multiples of (a, b).
        long long r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
        while (r1 != 0) {
            const long long q = r0 / r1;
            long long t = r0 - q * r1; r0 = r1; r1 = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
            t = y0 - q * y1; y0 = y1; y1 = t;
        }
        if (r0 < 0) x0 = -x0, y0 = -y0;
        long long c = -y0, dd = x0;
        // Shift (c, d) by the multiple of (a, b) that brings it closest to the origin.
        long long best_c = c, best_d = dd;
        for (long long k = -4 * bound; k <= 4 * bound; ++k) {
            const long long c2 = c - k * a, d2 = dd - k * b;
            if (std::max(std::llabs(c2), std::llabs(d2)) < std::max(std::llabs(best_c), std::llabs(best_d))) best_c = c2, best_d = d2;
        }
        c = best_c;
        dd = best_d;
        if (std::llabs(c) > bound || std::llabs(dd) > bound) continue;
        return dwline::SL2Z(a, b, c, dd);
    }
}

}  // namespace oracle
