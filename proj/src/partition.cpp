#include "lpsw/partition.hpp"

#include <cmath>

#include "lpsw/kernels.hpp"
#include "lpsw/spectral_ops.hpp"

namespace lpsw {
namespace {

double ramp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = ramp(t);
    return a / (a + ramp(1.0 - t));
}

std::vector<double> radial_table(const Grid& g, double (*profile)(double), double scale) {
    std::vector<double> table(g.size());
    for (int qx = 0; qx < g.n; ++qx) {
        const double k1 = g.wavenumber(g.freq_index(qx));
        for (int qy = 0; qy < g.n; ++qy) {
            const double k2 = g.wavenumber(g.freq_index(qy));
            const double rho = std::sqrt(k1 * k1 + k2 * k2) * scale;
            table[static_cast<std::size_t>(qx) * g.n + qy] = profile(rho);
        }
    }
    return table;
}

}  // namespace

double chi_profile(double rho) { return 1.0 - smooth_step((rho - 1.0) * 3.0); }

double phi_profile(double rho) { return chi_profile(rho / 2.0) - chi_profile(rho); }

const std::vector<double>& DyadicPartition::block_table(int j) const {
    if (j < -1 || j > j_max_)
        throw PreconditionError("dyadic block index " + std::to_string(j) + " out of range [-1, " +
                                std::to_string(j_max_) + "]");
    return j == -1 ? chi_table_ : phi_tables_[j];
}

const std::vector<double>& DyadicPartition::cutoff_table(int j) const {
    if (j < 0 || j > j_max_ + 2)
        throw PreconditionError("cutoff index " + std::to_string(j) + " out of range [0, " +
                                std::to_string(j_max_ + 2) + "]");
    return cutoff_tables_[j];
}

DyadicPartition build_partition(const Grid& grid, std::optional<int> j_max_override) {
    const double kmax = grid.lattice_kmax();
    const int j_auto = static_cast<int>(std::floor(std::log2(kmax / (4.0 / 3.0))));
    int j_max = j_auto;
    if (j_max_override) {
        if (*j_max_override > j_auto)
            throw ConfigError("requested j_max=" + std::to_string(*j_max_override) +
                              " exceeds the lattice maximum " + std::to_string(j_auto));
        j_max = *j_max_override;
    }
    if (j_max < 1)
        throw ConfigError("grid too small to host dyadic blocks j = -1, 0, 1 "
                          "(lattice kmax=" + std::to_string(kmax) + " gives j_max=" +
                          std::to_string(j_max) + "); increase n or decrease length");

    DyadicPartition p;
    p.grid_ = grid;
    p.j_max_ = j_max;
    p.chi_table_ = radial_table(grid, chi_profile, 1.0);
    p.phi_tables_.reserve(j_max + 1);
    for (int j = 0; j <= j_max; ++j)
        p.phi_tables_.push_back(radial_table(grid, phi_profile, std::ldexp(1.0, -j)));
    p.cutoff_tables_.reserve(j_max + 3);
    for (int j = 0; j <= j_max + 2; ++j)
        p.cutoff_tables_.push_back(radial_table(grid, chi_profile, std::ldexp(1.0, -j)));
    return p;
}

namespace {

SpectralField apply_table(const std::vector<double>& table, const SpectralField& f) {
    SpectralField out = f;
    for (int c = 0; c < f.components(); ++c) {
        auto* ptr = reinterpret_cast<double*>(out.comp(c).data());
        kernels::active().mul_table(ptr, table.data(), f.grid().size());
    }
    return out;
}

}  // namespace

SpectralField dyadic_block(const DyadicPartition& p, int j, const SpectralField& f) {
    require_same_grid(p.grid(), f.grid(), "dyadic_block");
    if (j <= -2) return SpectralField(f.grid(), f.components());
    return apply_table(p.block_table(j), f);
}

Field dyadic_block(const DyadicPartition& p, int j, const Field& f) {
    return dft_inverse(dyadic_block(p, j, dft_forward(f)));
}

SpectralField low_freq_cutoff(const DyadicPartition& p, int j, const SpectralField& f) {
    require_same_grid(p.grid(), f.grid(), "low_freq_cutoff");
    if (j < 0) throw PreconditionError("low_freq_cutoff requires j >= 0");
    return apply_table(p.cutoff_table(std::min(j, p.j_max() + 2)), f);
}

Field low_freq_cutoff(const DyadicPartition& p, int j, const Field& f) {
    return dft_inverse(low_freq_cutoff(p, j, dft_forward(f)));
}

Field paraproduct(const DyadicPartition& p, const Field& u, const Field& v) {
    require_same_grid(u.grid(), v.grid(), "paraproduct");
    require_same_grid(p.grid(), u.grid(), "paraproduct");
    SpectralField uh = dft_forward(u);
    SpectralField vh = dft_forward(v);
    dealias_inplace(uh);
    dealias_inplace(vh);
    const int out_comps =
        (u.components() == 1 || v.components() == 1) ? std::max(u.components(), v.components())
                                                     : 1;
    Field acc(u.grid(), out_comps);
    // S_{j-1} vanishes for j < 1, so the sum starts at j = 1
    for (int j = 1; j <= p.j_max(); ++j) {
        Field lo = dft_inverse(low_freq_cutoff(p, j - 1, uh));
        Field blk = dft_inverse(dyadic_block(p, j, vh));
        acc += banded_product(lo, blk);
    }
    return acc;
}

Field remainder(const DyadicPartition& p, const Field& u, const Field& v) {
    require_same_grid(u.grid(), v.grid(), "remainder");
    require_same_grid(p.grid(), u.grid(), "remainder");
    SpectralField uh = dft_forward(u);
    SpectralField vh = dft_forward(v);
    dealias_inplace(uh);
    dealias_inplace(vh);
    std::vector<Field> ublocks, vblocks;
    for (int j = -1; j <= p.j_max(); ++j) {
        ublocks.push_back(dft_inverse(dyadic_block(p, j, uh)));
        vblocks.push_back(dft_inverse(dyadic_block(p, j, vh)));
    }
    const int out_comps =
        (u.components() == 1 || v.components() == 1) ? std::max(u.components(), v.components())
                                                     : 1;
    Field acc(u.grid(), out_comps);
    for (int j = -1; j <= p.j_max(); ++j) {
        for (int k = std::max(-1, j - 1); k <= std::min(p.j_max(), j + 1); ++k)
            acc += banded_product(ublocks[k + 1], vblocks[j + 1]);
    }
    return acc;
}

}  // namespace lpsw
