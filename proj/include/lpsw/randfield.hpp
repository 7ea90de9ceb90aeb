#pragma once

#include <cstdint>

#include "lpsw/norms.hpp"
#include "lpsw/partition.hpp"

namespace lpsw {

// Random band-limited fields with spectrally decaying coefficients:
// independent complex Gaussians of magnitude ~ (1+|k|)^{-beta},
// Hermitian-symmetrised, restricted to the dealias band, an optional
// radial band [k_min, k_max], and the partition coverage when given.
// Samples are rescaled so the sup norm equals `amplitude`.
// Generation is fully deterministic in `seed` (own splitmix64 stream).
struct RandomFieldSpec {
    double beta = 3.0;
    std::uint64_t seed = 1;
    double amplitude = 1.0;
    double k_min = 0.0;
    double k_max = kInf;
    int components = 1;
    bool divergence_free = false;  // components == 2 only
};

Field random_field(const Grid& grid, const RandomFieldSpec& spec,
                   const DyadicPartition* coverage = nullptr);

// Derived per-trial seed stream.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

// amplitude * cos(k_m . x + phase) for lattice mode m.
Field cosine_mode(const Grid& grid, int m1, int m2, double amplitude, double phase = 0.0);

// Divergence-free single mode: amplitude * cos(k_m . x + phase) * e_perp(m).
Field cosine_mode_divfree(const Grid& grid, int m1, int m2, double amplitude, double phase = 0.0);

Field constant_field(const Grid& grid, double value, int components = 1);

// Steady shear v = (A sin(2 pi x2 / L), 0); divergence-free.
Field shear_flow(const Grid& grid, double amplitude);

}  // namespace lpsw
