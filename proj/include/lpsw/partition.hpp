#pragma once

#include <optional>
#include <vector>

#include "lpsw/grid.hpp"

namespace lpsw {

// Radial bump pair for the dyadic partition of unity, built from the
// mollifier ramp psi(t) = exp(-1/t):
//   chi = 1 on |xi| <= 1, smooth descent, 0 on |xi| >= 4/3
//   phi(xi) = chi(xi/2) - chi(xi),  supported in [1, 8/3]
// so chi(xi) + sum_{j=0..J} phi(2^-j xi) telescopes to chi(2^-(J+1) xi).
double chi_profile(double rho);
double phi_profile(double rho);

// Tabulated multipliers for the dyadic blocks on the frequency lattice.
// Block -1 is the low-frequency ball chi(k); block j >= 0 is the annulus
// phi(2^-j k). Low-pass tables s_j(k) = chi(2^-j k) realise the cutoff
// S_j = sum_{j' <= j-1} Delta_j'.
class DyadicPartition {
  public:
    const Grid& grid() const { return grid_; }
    int j_max() const { return j_max_; }

    // multiplier table for block j in [-1, j_max]
    const std::vector<double>& block_table(int j) const;
    // multiplier table for the cutoff S_j, j in [0, j_max + 2]
    const std::vector<double>& cutoff_table(int j) const;

    friend DyadicPartition build_partition(const Grid& grid, std::optional<int> j_max_override);

  private:
    Grid grid_;
    int j_max_ = 0;
    std::vector<double> chi_table_;
    std::vector<std::vector<double>> phi_tables_;
    std::vector<std::vector<double>> cutoff_tables_;
};

// Builds the partition with j_max = floor(log2(kmax / (4/3))) where kmax
// is the largest frequency magnitude on the lattice (box corner), so the
// partition of unity holds at every lattice point. A smaller j_max can be
// forced for audit purposes.
DyadicPartition build_partition(const Grid& grid, std::optional<int> j_max_override = {});

// Delta_j f: zero for j <= -2, ball multiplier for j = -1, annulus
// multiplier for 0 <= j <= j_max.
SpectralField dyadic_block(const DyadicPartition& p, int j, const SpectralField& f);
Field dyadic_block(const DyadicPartition& p, int j, const Field& f);

// S_j f = sum_{j' <= j-1} Delta_j' f, realised as the single multiplier
// chi(2^-j k); j >= 0, saturating at full reconstruction above j_max + 1.
SpectralField low_freq_cutoff(const DyadicPartition& p, int j, const SpectralField& f);
Field low_freq_cutoff(const DyadicPartition& p, int j, const Field& f);

// Bony operators (all products dealiased):
//   paraproduct(u, v) = T_u v = sum_j S_{j-1} u . Delta_j v
//   remainder(u, v)   = R(u, v) = sum_{|k-j| <= 1} Delta_k u . Delta_j v
Field paraproduct(const DyadicPartition& p, const Field& u, const Field& v);
Field remainder(const DyadicPartition& p, const Field& u, const Field& v);

}  // namespace lpsw
