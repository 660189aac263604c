#pragma once

// Independent reference computations for tests. Everything here works on
// plain index arithmetic over explicit bit strings and shares no code path
// with the library's tensor/canonicalize/project kernels.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "crossbell/bell.hpp"

namespace bf {

using C = std::complex<double>;
using crossbell::BellKind;

inline double bell_amp(BellKind k, int u, int v) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (k) {
    case BellKind::PsiPlus: return u == v ? h : 0.0;
    case BellKind::PsiMinus: return u == v ? (u ? -h : h) : 0.0;
    case BellKind::PhiPlus: return u != v ? h : 0.0;
    case BellKind::PhiMinus: return u != v ? (u ? -h : h) : 0.0;
    }
    return 0.0;
}

inline int bit(std::size_t index, std::size_t pos, std::size_t width) { return static_cast<int>((index >> (width - 1 - pos)) & 1U); }

/// Amplitudes of the n-slot channel on ids 1..2n (ascending, id 1 = MSB);
/// slot m pairs ids m+1 and n+m+1.
inline std::vector<C> channel(const std::vector<BellKind>& kinds) {
    const std::size_t n = kinds.size();
    std::vector<C> out(std::size_t{1} << (2 * n));
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        C a = 1.0;
        for (std::size_t m = 0; m < n; ++m) a *= bell_amp(kinds[m], bit(idx, m, 2 * n), bit(idx, n + m, 2 * n));
        out[idx] = a;
    }
    return out;
}

/// Bob's unnormalized state after Alice finds `outcome`, from the explicit sum
/// over Alice's and the client's bits of conj(Bell) * channel * client.
inline std::vector<C> bob_unnormalized(const std::vector<BellKind>& kinds, const std::vector<BellKind>& outcome,
                                       const std::vector<C>& client) {
    const std::size_t n = kinds.size();
    const std::size_t d = std::size_t{1} << n;
    const auto ch = channel(kinds);
    std::vector<C> bob(d, 0.0);
    for (std::size_t b = 0; b < d; ++b)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t c = 0; c < d; ++c) {
                C w = ch[(b << n) | a] * client[c];
                for (std::size_t m = 0; m < n; ++m) w *= bell_amp(outcome[m], bit(a, m, n), bit(c, m, n));
                bob[b] += w;
            }
    return bob;
}

inline double norm2(const std::vector<C>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
}

/// |<a|b>|^2 / (|a|^2 |b|^2).
inline double overlap(const std::vector<C>& a, const std::vector<C>& b) {
    C s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return std::norm(s) / (norm2(a) * norm2(b));
}

/// Cross product coefficient rule for three bipartite factors on pairs
/// (1,4),(2,5),(3,6): amplitude at (i,r,x,j,s,y) is c_ij * d_rs * e_xy.
inline std::vector<C> cross3(const std::vector<C>& c, const std::vector<C>& d, const std::vector<C>& e) {
    std::vector<C> out(64);
    for (std::size_t idx = 0; idx < 64; ++idx) {
        const int i = bit(idx, 0, 6), r = bit(idx, 1, 6), x = bit(idx, 2, 6);
        const int j = bit(idx, 3, 6), s = bit(idx, 4, 6), y = bit(idx, 5, 6);
        out[idx] = c[2 * i + j] * d[2 * r + s] * e[2 * x + y];
    }
    return out;
}

} // namespace bf
