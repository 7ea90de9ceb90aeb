#include "lpsw/norms.hpp"

#include <cmath>

#include "lpsw/fft.hpp"
#include "lpsw/kernels.hpp"

namespace lpsw {
namespace {

// pointwise Euclidean magnitude across components
std::vector<double> magnitude_samples(const Field& f) {
    const std::size_t n2 = f.samples_per_component();
    std::vector<double> mag(n2);
    if (f.components() == 1) {
        auto d = f.comp(0);
        std::copy(d.begin(), d.end(), mag.begin());
        return mag;
    }
    const auto& k = kernels::active();
    std::vector<double> tmp(n2);
    k.vmul(mag.data(), f.comp(0).data(), f.comp(0).data(), n2);
    for (int c = 1; c < f.components(); ++c) {
        k.vmul(tmp.data(), f.comp(c).data(), f.comp(c).data(), n2);
        k.vadd(mag.data(), mag.data(), tmp.data(), n2);
    }
    for (auto& v : mag) v = std::sqrt(v);
    return mag;
}

double lp_of_samples(const std::vector<double>& mag, double p, double spacing) {
    if (p == kInf) return kernels::active().max_abs(mag.data(), mag.size());
    const double s = kernels::sum_pow(mag.data(), mag.size(), p);
    return std::pow(spacing * spacing * s, 1.0 / p);
}

}  // namespace

void validate(const BesovParams& bp) {
    std::vector<std::string> bad;
    if (!(bp.p >= 1.0)) bad.push_back("Besov p must be >= 1");
    if (!(bp.r >= 1.0)) bad.push_back("Besov r must be >= 1");
    if (!std::isfinite(bp.s)) bad.push_back("Besov s must be finite");
    if (!bad.empty()) throw ConfigError(bad);
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw PreconditionError("lp_norm requires p >= 1");
    if (f.empty()) throw ConfigError("lp_norm: empty field");
    return lp_of_samples(magnitude_samples(f), p, f.grid().spacing());
}

double lr_aggregate(const std::vector<double>& values, double r) {
    if (r == kInf) {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }
    double s = 0.0;
    for (double v : values) s += std::pow(v, r);
    return std::pow(s, 1.0 / r);
}

namespace {

void check_coverage(const DyadicPartition& p, const SpectralField& f) {
    const Grid& g = f.grid();
    const double top_edge = (8.0 / 3.0) * std::ldexp(1.0, p.j_max());
    if (g.lattice_kmax() <= top_edge) return;  // no lattice point can exceed coverage
    double outside = 0.0, total = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        auto spec = f.comp(c);
        for (int qx = 0; qx < g.n; ++qx) {
            const double k1 = g.wavenumber(g.freq_index(qx));
            for (int qy = 0; qy < g.n; ++qy) {
                const double k2 = g.wavenumber(g.freq_index(qy));
                const double m = std::norm(spec[static_cast<std::size_t>(qx) * g.n + qy]);
                total += m;
                if (k1 * k1 + k2 * k2 > top_edge * top_edge) outside += m;
            }
        }
    }
    if (total > 0.0 && outside > 1e-26 * total)
        throw CoverageError("field has spectral mass above the top annulus (relative " +
                            std::to_string(std::sqrt(outside / total)) +
                            "); refusing to truncate silently");
}

}  // namespace

NormReport besov_norm(const DyadicPartition& p, const SpectralField& f, const BesovParams& bp) {
    validate(bp);
    require_same_grid(p.grid(), f.grid(), "besov_norm");
    check_coverage(p, f);
    NormReport report;
    report.params = bp;
    std::vector<double> ladder;
    for (int j = -1; j <= p.j_max(); ++j) {
        const Field blk = dft_inverse(dyadic_block(p, j, f));
        const double w = std::pow(2.0, bp.s * j) * lp_norm(blk, bp.p);
        report.per_block.emplace_back(j, w);
        ladder.push_back(w);
    }
    report.total = lr_aggregate(ladder, bp.r);
    return report;
}

NormReport besov_norm(const DyadicPartition& p, const Field& f, const BesovParams& bp) {
    return besov_norm(p, dft_forward(f), bp);
}

double sobolev_norm(const SpectralField& f, double s) {
    const Grid& g = f.grid();
    std::vector<double> w(g.size());
    for (int qx = 0; qx < g.n; ++qx) {
        const double k1 = g.wavenumber(g.freq_index(qx));
        for (int qy = 0; qy < g.n; ++qy) {
            const double k2 = g.wavenumber(g.freq_index(qy));
            w[static_cast<std::size_t>(qx) * g.n + qy] = std::pow(1.0 + k1 * k1 + k2 * k2, s);
        }
    }
    double sum = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        const auto* ptr = reinterpret_cast<const double*>(f.comp(c).data());
        sum += kernels::active().sum_sq_weighted(ptr, w.data(), g.size());
    }
    return g.length * std::sqrt(sum);
}

double sobolev_norm(const Field& f, double s) { return sobolev_norm(dft_forward(f), s); }

namespace {

void validate_trajectory(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw PreconditionError("trajectory is empty");
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i)
        if (!(traj.snapshots[i].t > traj.snapshots[i - 1].t))
            throw PreconditionError("trajectory times must be strictly increasing");
}

// trapezoid L^rho norm in time of a sampled nonnegative function
double time_lp(const std::vector<double>& times, const std::vector<double>& vals, double rho) {
    if (rho == kInf) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, v);
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double dt = times[i + 1] - times[i];
        s += 0.5 * dt * (std::pow(vals[i], rho) + std::pow(vals[i + 1], rho));
    }
    return std::pow(s, 1.0 / rho);
}

}  // namespace

BlockSeries block_lp_series(const DyadicPartition& p, const Trajectory& traj, double lp) {
    validate_trajectory(traj);
    BlockSeries series;
    series.j_max = p.j_max();
    series.p = lp;
    for (const auto& snap : traj.snapshots) series.times.push_back(snap.t);
    series.block_lp.assign(p.j_max() + 2, std::vector<double>(traj.snapshots.size(), 0.0));
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        SpectralField fh = dft_forward(traj.snapshots[i].f);
        check_coverage(p, fh);
        for (int j = -1; j <= p.j_max(); ++j)
            series.block_lp[j + 1][i] = lp_norm(dft_inverse(dyadic_block(p, j, fh)), lp);
    }
    return series;
}

TrajectoryNorm chemin_lerner_from_series(const BlockSeries& series, double rho,
                                         const BesovParams& bp) {
    TrajectoryNorm out;
    out.rho = rho;
    out.params = bp;
    std::vector<double> ladder;
    for (int j = -1; j <= series.j_max; ++j) {
        const double tnorm = time_lp(series.times, series.block_lp[j + 1], rho);
        const double w = std::pow(2.0, bp.s * j) * tnorm;
        out.per_block_time.emplace_back(j, w);
        ladder.push_back(w);
    }
    out.total = lr_aggregate(ladder, bp.r);
    return out;
}

TrajectoryNorm chemin_lerner_norm(const DyadicPartition& p, const Trajectory& traj, double rho,
                                  const BesovParams& bp) {
    validate(bp);
    if (!(rho >= 1.0)) throw PreconditionError("chemin_lerner_norm requires rho >= 1");
    return chemin_lerner_from_series(block_lp_series(p, traj, bp.p), rho, bp);
}

double time_lp_besov_norm(const DyadicPartition& p, const Trajectory& traj, double rho,
                          const BesovParams& bp) {
    validate(bp);
    validate_trajectory(traj);
    std::vector<double> times, vals;
    for (const auto& snap : traj.snapshots) {
        times.push_back(snap.t);
        vals.push_back(besov_norm(p, snap.f, bp).total);
    }
    return time_lp(times, vals, rho);
}

Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b) {
    if (a.snapshots.size() != b.snapshots.size())
        throw PreconditionError("trajectory_difference: snapshot counts differ");
    Trajectory out;
    out.meta = a.meta;
    out.snapshots.reserve(a.snapshots.size());
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        if (std::abs(a.snapshots[i].t - b.snapshots[i].t) > 1e-12)
            throw PreconditionError("trajectory_difference: time grids differ");
        out.snapshots.push_back({a.snapshots[i].t, a.snapshots[i].f - b.snapshots[i].f});
    }
    return out;
}

}  // namespace lpsw
