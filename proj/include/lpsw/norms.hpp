#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lpsw/partition.hpp"

namespace lpsw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// (s, p, r): smoothness, spatial integrability, block summability.
// p = r = infinity are encoded as kInf.
struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    double r = 2.0;
};

void validate(const BesovParams& bp);

// Per-block norm ladder 2^{js} ||Delta_j f||_{L^p} and its l^r aggregate.
struct NormReport {
    BesovParams params;
    std::vector<std::pair<int, double>> per_block;
    double total = 0.0;
};

// Time-space ladder 2^{js} ||Delta_j f||_{L^rho_T(L^p)} and aggregate.
struct TrajectoryNorm {
    double rho = kInf;
    BesovParams params;
    std::vector<std::pair<int, double>> per_block_time;
    double total = 0.0;
};

struct Trajectory {
    struct Snapshot {
        double t;
        Field f;
    };
    std::vector<Snapshot> snapshots;
    struct Meta {
        std::string scheme;
        double dt = 0.0;
        double nu = 0.0;
        std::string sampler;  // velocity sampling mode used to produce it
        int cadence = 1;      // steps between stored snapshots
    } meta;

    double duration() const {
        return snapshots.empty() ? 0.0 : snapshots.back().t - snapshots.front().t;
    }
};

// Grid-quadrature L^p norm, p in [1, inf]. Multi-component fields are
// measured through the pointwise Euclidean magnitude.
double lp_norm(const Field& f, double p);

// l^r aggregate of a ladder (max for r = inf).
double lr_aggregate(const std::vector<double>& values, double r);

// Besov norm B^s_{p,r}. Fields with relative spectral mass above the top
// annulus beyond 1e-13 are rejected with CoverageError.
NormReport besov_norm(const DyadicPartition& p, const Field& f, const BesovParams& bp);
NormReport besov_norm(const DyadicPartition& p, const SpectralField& f, const BesovParams& bp);

// Sobolev norm computed spectrally: L * sqrt(sum (1+|k|^2)^s |f^(k)|^2),
// components summed. Equivalent to B^s_{2,2} up to partition constants.
double sobolev_norm(const SpectralField& f, double s);
double sobolev_norm(const Field& f, double s);

// Chemin-Lerner norm over a stored trajectory; time integrals use the
// trapezoid rule on the snapshot grid, rho = inf takes the maximum.
TrajectoryNorm chemin_lerner_norm(const DyadicPartition& p, const Trajectory& traj, double rho,
                                  const BesovParams& bp);

// Per-block, per-snapshot L^p ladder a[j+1][i] = ||Delta_j f(t_i)||_{L^p};
// reused when several (s, rho, r) norms of one trajectory are needed.
struct BlockSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> block_lp;  // [j + 1][snapshot]
    int j_max = 0;
    double p = 2.0;
};
BlockSeries block_lp_series(const DyadicPartition& p, const Trajectory& traj, double lp);
TrajectoryNorm chemin_lerner_from_series(const BlockSeries& series, double rho,
                                         const BesovParams& bp);

// L^rho_T(B^s_{p,r}) with the order of integration swapped (norm in space
// first, then time); used for the Minkowski comparison properties.
double time_lp_besov_norm(const DyadicPartition& p, const Trajectory& traj, double rho,
                          const BesovParams& bp);

Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b);

}  // namespace lpsw
