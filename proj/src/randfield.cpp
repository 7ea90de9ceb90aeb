#include "lpsw/randfield.hpp"

#include <cmath>

#include "lpsw/spectral_ops.hpp"

namespace lpsw {
namespace {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() {  // (0, 1)
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
    // standard normal via Box-Muller (two uniforms per draw, fixed order)
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }
};

SpectralField synth_scalar(const Grid& g, const RandomFieldSpec& spec, double coverage_kmax) {
    SplitMix64 rng{spec.seed ^ 0xA5A5A5A5DEADBEEFULL};
    SpectralField out(g, 1);
    auto coef = out.comp(0);
    const int cut = g.dealias_cutoff();
    const int half = g.n / 2;
    for (int m1 = 0; m1 <= cut; ++m1) {
        for (int m2 = -cut; m2 <= cut; ++m2) {
            // half-space representative: m1 > 0, or m1 == 0 and m2 > 0
            if (m1 == 0 && m2 <= 0) continue;
            const double kk = g.dk() * std::sqrt(double(m1) * m1 + double(m2) * m2);
            const double gre = rng.normal();
            const double gim = rng.normal();
            if (kk < spec.k_min || kk > spec.k_max || kk > coverage_kmax) continue;
            const double mag = std::pow(1.0 + kk, -spec.beta);
            const std::complex<double> z(mag * gre, mag * gim);
            const int qx = (m1 + g.n) % g.n;
            const int qy = (m2 + g.n) % g.n;
            const int qxc = (g.n - qx) % g.n;
            const int qyc = (g.n - qy) % g.n;
            (void)half;
            coef[static_cast<std::size_t>(qx) * g.n + qy] = z;
            coef[static_cast<std::size_t>(qxc) * g.n + qyc] = std::conj(z);
        }
    }
    return out;
}

Field normalise_amplitude(Field f, double amplitude) {
    const double m = max_abs(f);
    if (m > 0.0) {
        Field scaled = (amplitude / m) * f;
        return scaled;
    }
    return f;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 rng{master + 0x9E3779B97F4A7C15ULL * (index + 1)};
    return rng.next();
}

Field random_field(const Grid& grid, const RandomFieldSpec& spec,
                   const DyadicPartition* coverage) {
    if (spec.components != 1 && spec.components != 2)
        throw ConfigError("random_field supports 1 or 2 components");
    if (spec.divergence_free && spec.components != 2)
        throw ConfigError("divergence_free requires components == 2");
    double cov_kmax = kInf;
    if (coverage != nullptr) {
        require_same_grid(grid, coverage->grid(), "random_field");
        cov_kmax = (4.0 / 3.0) * std::ldexp(1.0, coverage->j_max());
    }

    if (spec.components == 1) {
        Field f = dft_inverse(synth_scalar(grid, spec, cov_kmax));
        return normalise_amplitude(std::move(f), spec.amplitude);
    }

    if (spec.divergence_free) {
        // v = (-d2 psi, d1 psi) for a random stream function psi
        SpectralField psi = synth_scalar(grid, spec, cov_kmax);
        SpectralField grad = gradient(psi);
        SpectralField v(grid, 2);
        auto gx = grad.comp(0);
        auto gy = grad.comp(1);
        auto v0 = v.comp(0);
        auto v1 = v.comp(1);
        for (std::size_t i = 0; i < v0.size(); ++i) {
            v0[i] = -gy[i];
            v1[i] = gx[i];
        }
        return normalise_amplitude(dft_inverse(v), spec.amplitude);
    }

    SpectralField v(grid, 2);
    RandomFieldSpec s0 = spec;
    RandomFieldSpec s1 = spec;
    s1.seed = trial_seed(spec.seed, 0x517CC1B727220A95ULL);
    SpectralField c0 = synth_scalar(grid, s0, cov_kmax);
    SpectralField c1 = synth_scalar(grid, s1, cov_kmax);
    std::copy(c0.comp(0).begin(), c0.comp(0).end(), v.comp(0).begin());
    std::copy(c1.comp(0).begin(), c1.comp(0).end(), v.comp(1).begin());
    return normalise_amplitude(dft_inverse(v), spec.amplitude);
}

Field cosine_mode(const Grid& grid, int m1, int m2, double amplitude, double phase) {
    Field f(grid, 1);
    auto vals = f.comp(0);
    const double k1 = grid.wavenumber(m1);
    const double k2 = grid.wavenumber(m2);
    const double h = grid.spacing();
    for (int ix = 0; ix < grid.n; ++ix)
        for (int iy = 0; iy < grid.n; ++iy)
            vals[static_cast<std::size_t>(ix) * grid.n + iy] =
                amplitude * std::cos(k1 * ix * h + k2 * iy * h + phase);
    return f;
}

Field cosine_mode_divfree(const Grid& grid, int m1, int m2, double amplitude, double phase) {
    if (m1 == 0 && m2 == 0) throw ConfigError("cosine_mode_divfree: zero mode has no direction");
    Field f(grid, 2);
    const double norm = std::sqrt(double(m1) * m1 + double(m2) * m2);
    const double e1 = -m2 / norm;
    const double e2 = m1 / norm;
    const Field scal = cosine_mode(grid, m1, m2, amplitude, phase);
    auto s = scal.comp(0);
    auto f0 = f.comp(0);
    auto f1 = f.comp(1);
    for (std::size_t i = 0; i < s.size(); ++i) {
        f0[i] = e1 * s[i];
        f1[i] = e2 * s[i];
    }
    return f;
}

Field constant_field(const Grid& grid, double value, int components) {
    Field f(grid, components);
    for (auto& v : f.data()) v = value;
    return f;
}

Field shear_flow(const Grid& grid, double amplitude) {
    Field v(grid, 2);
    auto v0 = v.comp(0);
    const double h = grid.spacing();
    for (int ix = 0; ix < grid.n; ++ix)
        for (int iy = 0; iy < grid.n; ++iy)
            v0[static_cast<std::size_t>(ix) * grid.n + iy] =
                amplitude * std::sin(kTwoPi * iy * h / grid.length);
    return v;
}

}  // namespace lpsw
