#pragma once

// Test-only reference implementations, kept independent of the library's
// FFT/table pipeline: direct O(n^4) transforms, explicit convolution and
// per-definition block sums. Slow, for small grids.

#include <complex>
#include <vector>

#include "lpsw/partition.hpp"

namespace lpsw::oracle {

using cd = std::complex<double>;

// direct forward DFT, same normalisation as dft_forward
inline std::vector<cd> direct_dft(const Field& f, int comp = 0) {
    const Grid& g = f.grid();
    std::vector<cd> out(g.size());
    auto vals = f.comp(comp);
    for (int m1 = 0; m1 < g.n; ++m1)
        for (int m2 = 0; m2 < g.n; ++m2) {
            cd acc(0.0, 0.0);
            for (int x1 = 0; x1 < g.n; ++x1)
                for (int x2 = 0; x2 < g.n; ++x2) {
                    const double ph = -kTwoPi * (double(m1) * x1 + double(m2) * x2) / g.n;
                    acc += vals[static_cast<std::size_t>(x1) * g.n + x2] *
                           cd(std::cos(ph), std::sin(ph));
                }
            out[static_cast<std::size_t>(m1) * g.n + m2] = acc / double(g.size());
        }
    return out;
}

inline Field direct_idft(const Grid& g, const std::vector<cd>& coef) {
    Field f(g, 1);
    auto vals = f.comp(0);
    for (int x1 = 0; x1 < g.n; ++x1)
        for (int x2 = 0; x2 < g.n; ++x2) {
            cd acc(0.0, 0.0);
            for (int m1 = 0; m1 < g.n; ++m1)
                for (int m2 = 0; m2 < g.n; ++m2) {
                    const double ph = kTwoPi * (double(m1) * x1 + double(m2) * x2) / g.n;
                    acc += coef[static_cast<std::size_t>(m1) * g.n + m2] *
                           cd(std::cos(ph), std::sin(ph));
                }
            vals[static_cast<std::size_t>(x1) * g.n + x2] = acc.real();
        }
    return f;
}

// product of two scalar fields by explicit spectral convolution,
// truncated to the dealias band (the reference for pointwise_product)
inline Field convolution_product(const Field& a, const Field& b) {
    const Grid& g = a.grid();
    const int n = g.n, cut = g.dealias_cutoff();
    const auto ah = direct_dft(a);
    const auto bh = direct_dft(b);
    auto idx = [&](int m1, int m2) {
        return static_cast<std::size_t>((m1 + n) % n) * n + (m2 + n) % n;
    };
    auto banded = [&](int m1, int m2) { return std::abs(m1) <= cut && std::abs(m2) <= cut; };
    std::vector<cd> ch(g.size(), cd(0, 0));
    for (int p1 = -n / 2; p1 < n / 2; ++p1)
        for (int p2 = -n / 2; p2 < n / 2; ++p2) {
            if (!banded(p1, p2)) continue;
            for (int q1 = -n / 2; q1 < n / 2; ++q1)
                for (int q2 = -n / 2; q2 < n / 2; ++q2) {
                    if (!banded(q1, q2)) continue;
                    const int r1 = p1 + q1, r2 = p2 + q2;
                    if (!banded(r1, r2)) continue;
                    ch[idx(r1, r2)] += ah[idx(p1, p2)] * bh[idx(q1, q2)];
                }
        }
    return direct_idft(g, ch);
}

// Delta_j by re-evaluating the radial profiles per lattice point and
// multiplying the direct DFT (no shared tables with the implementation)
inline Field definition_block(const Grid& g, int j, const Field& f) {
    auto coef = direct_dft(f);
    for (int q1 = 0; q1 < g.n; ++q1)
        for (int q2 = 0; q2 < g.n; ++q2) {
            const double k1 = g.wavenumber(g.freq_index(q1));
            const double k2 = g.wavenumber(g.freq_index(q2));
            const double rho = std::hypot(k1, k2);
            const double mult =
                j == -1 ? chi_profile(rho) : phi_profile(rho * std::ldexp(1.0, -j));
            coef[static_cast<std::size_t>(q1) * g.n + q2] *= mult;
        }
    return direct_idft(g, coef);
}

// S_j by summing definition blocks Delta_{-1} + ... + Delta_{j-1}
inline Field definition_cutoff(const Grid& g, int j_max_avail, int j, const Field& f) {
    Field acc(g, 1);
    for (int jp = -1; jp <= std::min(j - 1, j_max_avail); ++jp) acc += definition_block(g, jp, f);
    return acc;
}

inline double linf_diff(const Field& a, const Field& b) { return max_abs(a - b); }

// least-squares geometric decay ratio of a positive sequence
inline double fit_ratio(const std::vector<double>& vals) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double x = static_cast<double>(i), y = std::log(vals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(vals.size());
    return std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

}  // namespace lpsw::oracle
