#include "lpsw/linsolve.hpp"

#include <cmath>

#include "lpsw/fft.hpp"
#include "lpsw/kernels.hpp"
#include "lpsw/spectral_ops.hpp"

namespace lpsw {
namespace {

void apply_factor(SpectralField& y, const std::vector<double>& table) {
    for (int c = 0; c < y.components(); ++c)
        kernels::active().mul_table(reinterpret_cast<double*>(y.comp(c).data()), table.data(),
                                    y.grid().size());
}

SpectralField scaled_by(const SpectralField& y, const std::vector<double>& table) {
    SpectralField out = y;
    apply_factor(out, table);
    return out;
}

}  // namespace

IntegrationResult integrate_ifrk4(const SpectralField& y0, const DerivFn& rhs,
                                  const IntegratorOptions& opts) {
    if (!(opts.T > 0.0)) throw ConfigError("integrator horizon must be positive");
    if (!(opts.dt > 0.0)) throw ConfigError("integrator step must be positive");
    if (opts.nu < 0.0) throw ConfigError("diffusion coefficient must be nonnegative");

    const int steps = std::max(1, static_cast<int>(std::ceil(opts.T / opts.dt - 1e-9)));
    const double dt = opts.T / steps;
    const Grid& g = y0.grid();

    const bool diffusive = opts.nu > 0.0;
    std::vector<double> e_half, e_full;
    if (diffusive) {
        e_half = heat_multiplier(g, opts.nu, dt / 2.0);
        e_full = heat_multiplier(g, opts.nu, dt);
    }

    IntegrationResult result;
    result.steps = steps;
    result.dt = dt;
    result.traj.meta.scheme = diffusive ? "ifrk4" : "rk4";
    result.traj.meta.dt = dt;
    result.traj.meta.nu = opts.nu;
    result.traj.meta.cadence = opts.snapshot_cadence;
    if (opts.record_stages) result.stages.dt = dt;

    SpectralField y = y0;
    result.traj.snapshots.push_back({0.0, dft_inverse(y)});

    for (int step = 0; step < steps; ++step) {
        const double t = step * dt;

        // stage states
        const SpectralField& y1 = y;
        SpectralField n1 = rhs(t, step, 0, y1);

        SpectralField y2 = y1;
        axpy(y2, dt / 2.0, n1);
        if (diffusive) apply_factor(y2, e_half);
        SpectralField n2 = rhs(t + dt / 2.0, step, 1, y2);

        SpectralField y3 = diffusive ? scaled_by(y1, e_half) : y1;
        axpy(y3, dt / 2.0, n2);
        SpectralField n3 = rhs(t + dt / 2.0, step, 2, y3);

        SpectralField y4 = diffusive ? scaled_by(y1, e_full) : y1;
        if (diffusive) {
            SpectralField en3 = scaled_by(n3, e_half);
            axpy(y4, dt, en3);
        } else {
            axpy(y4, dt, n3);
        }
        SpectralField n4 = rhs(t + dt, step, 3, y4);

        if (opts.record_stages)
            result.stages.states.push_back({y1, std::move(y2), std::move(y3), std::move(y4)});

        // y' = E2 y + dt/6 (E2 n1 + 2 E n2 + 2 E n3 + n4)
        SpectralField ynew = y;
        axpy(ynew, dt / 6.0, n1);
        if (diffusive) apply_factor(ynew, e_full);
        if (diffusive) {
            apply_factor(n2, e_half);
            apply_factor(n3, e_half);
        }
        axpy(ynew, dt / 3.0, n2);
        axpy(ynew, dt / 3.0, n3);
        axpy(ynew, dt / 6.0, n4);
        y = std::move(ynew);

        if (!all_finite(y)) throw DivergenceError((step + 1) * dt);

        const bool last = step + 1 == steps;
        if (last || (step + 1) % opts.snapshot_cadence == 0)
            result.traj.snapshots.push_back({(step + 1) * dt, dft_inverse(y)});
    }
    return result;
}

SpectralField advection_term(const Field& velocity, const SpectralField& y) {
    if (velocity.components() != 2)
        throw ConfigError("advection velocity must be a vector field");
    require_same_grid(velocity.grid(), y.grid(), "advection_term");
    Field adv(y.grid(), y.components());
    for (int c = 0; c < y.components(); ++c) {
        SpectralField yc(y.grid(), 1);
        std::copy(y.comp(c).begin(), y.comp(c).end(), yc.comp(0).begin());
        Field grad_c = dft_inverse(gradient(yc));
        Field dot = banded_product(velocity, grad_c);
        std::copy(dot.comp(0).begin(), dot.comp(0).end(), adv.comp(c).begin());
    }
    SpectralField out = dft_forward(adv);
    dealias_inplace(out);
    kernels::active().vscale(reinterpret_cast<double*>(out.data().data()), -1.0,
                             2 * out.data().size());
    return out;
}

LinearInterpSampler::LinearInterpSampler(const Trajectory& traj) : traj_(&traj) {
    if (traj.snapshots.empty()) throw PreconditionError("sampler over empty trajectory");
}

Field LinearInterpSampler::at(double t) const {
    const auto& snaps = traj_->snapshots;
    if (t <= snaps.front().t) return snaps.front().f;
    if (t >= snaps.back().t) return snaps.back().f;
    std::size_t lo = 0, hi = snaps.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (snaps[mid].t <= t ? lo : hi) = mid;
    }
    const double w = (t - snaps[lo].t) / (snaps[hi].t - snaps[lo].t);
    Field out = (1.0 - w) * snaps[lo].f;
    axpy(out, w, snaps[hi].f);
    return out;
}

namespace {

double max_velocity(const LinearProblem& prob) {
    double vmax = 0.0;
    if (prob.velocity) vmax = std::max(vmax, max_abs(*prob.velocity));
    if (prob.velocity_traj != nullptr)
        for (const auto& s : prob.velocity_traj->snapshots) vmax = std::max(vmax, max_abs(s.f));
    return vmax;
}

Trajectory run_linear(const LinearProblem& prob) {
    if (prob.f0.empty()) throw ConfigError("linear problem: initial data missing");
    const Grid& g = prob.f0.grid();
    if (prob.velocity && prob.velocity->components() != 2)
        throw ConfigError("linear problem: velocity must be a vector field");

    const double dt_max = cfl_dt_limit(prob);
    double dt = prob.dt;
    if (dt == 0.0)
        dt = std::min(dt_max, prob.T / 64.0);
    else if (dt > dt_max)
        throw CflError(dt, dt_max);

    std::optional<LinearInterpSampler> vel_sampler, force_sampler;
    if (prob.velocity_traj != nullptr) vel_sampler.emplace(*prob.velocity_traj);
    if (prob.forcing_traj != nullptr) force_sampler.emplace(*prob.forcing_traj);

    SpectralField f0h = dft_forward(prob.f0);
    dealias_inplace(f0h);

    std::optional<SpectralField> static_force;
    if (prob.forcing) {
        if (prob.forcing->components() != prob.f0.components())
            throw ConfigError("linear problem: forcing/initial component mismatch");
        static_force = dft_forward(*prob.forcing);
        dealias_inplace(*static_force);
    }

    DerivFn rhs = [&](double t, int /*step*/, int /*stage*/, const SpectralField& y) {
        SpectralField out(y.grid(), y.components());
        const bool has_velocity = prob.velocity || vel_sampler;
        if (has_velocity) {
            Field v = vel_sampler ? vel_sampler->at(t) : *prob.velocity;
            out = advection_term(v, y);
        }
        if (static_force) out += *static_force;
        if (force_sampler) {
            SpectralField gh = dft_forward(force_sampler->at(t));
            dealias_inplace(gh);
            out += gh;
        }
        return out;
    };

    IntegratorOptions opts;
    opts.T = prob.T;
    opts.dt = dt;
    opts.nu = prob.nu;
    opts.snapshot_cadence = prob.snapshot_cadence;
    IntegrationResult res = integrate_ifrk4(f0h, rhs, opts);
    res.traj.meta.sampler = prob.velocity_traj != nullptr ? "linear" : "static";
    (void)g;
    return std::move(res.traj);
}

}  // namespace

double cfl_dt_limit(const LinearProblem& prob) {
    const double vmax = max_velocity(prob);
    if (vmax == 0.0) return kInf;
    return kCflSafety * prob.f0.grid().spacing() / vmax;
}

Trajectory solve_transport(const LinearProblem& prob) {
    if (prob.nu != 0.0) throw ConfigError("solve_transport requires nu == 0");
    return run_linear(prob);
}

Trajectory solve_transport_diffusion(const LinearProblem& prob) {
    if (!(prob.nu > 0.0)) throw ConfigError("solve_transport_diffusion requires nu > 0");
    return run_linear(prob);
}

Trajectory static_trajectory(const Field& f, double T) {
    Trajectory traj;
    traj.meta.scheme = "static";
    traj.snapshots.push_back({0.0, f});
    traj.snapshots.push_back({T, f});
    return traj;
}

std::string select_v_branch(double s, double p1, double r) {
    const double edge = 1.0 + 2.0 / p1;
    if (s > edge || (s == edge && r == 1.0)) return "B^{s-1}_{p1,r}";
    if (s < edge) return "B^{2/p1}_{p1,inf} ^ Linf";
    throw PreconditionError(
        "velocity-gradient branch undefined at s = 1 + 2/p1 with r > 1; choose another p1");
}

namespace {

void check_condition_210(double s, double p, double p1, double r) {
    const double pprime = p == 1.0 ? kInf : p / (p - 1.0);
    const double bound = -2.0 * std::min(1.0 / p1, 1.0 / pprime);
    const bool ok = r == kInf ? s >= bound : s > bound;
    if (!ok)
        throw PreconditionError("condition (s, p, p1, r) outside the admissible region: s=" +
                                std::to_string(s) + " must exceed " + std::to_string(bound) +
                                (r == kInf ? " (>= allowed for r = inf)" : " strictly"));
    if (!(p >= 1.0 && p1 >= p && r >= 1.0))
        throw PreconditionError("need 1 <= p <= p1 and r >= 1");
}

// Frobenius gradient of a velocity snapshot as a 4-component field.
Field velocity_gradient(const Field& v) {
    if (v.components() != 2) throw PreconditionError("velocity must have 2 components");
    SpectralField vh = dft_forward(v);
    Field out(v.grid(), 4);
    for (int c = 0; c < 2; ++c) {
        SpectralField vc(v.grid(), 1);
        std::copy(vh.comp(c).begin(), vh.comp(c).end(), vc.comp(0).begin());
        Field g = dft_inverse(gradient(vc));
        std::copy(g.comp(0).begin(), g.comp(0).end(), out.comp(2 * c).begin());
        std::copy(g.comp(1).begin(), g.comp(1).end(), out.comp(2 * c + 1).begin());
    }
    return out;
}

double v_branch_value(const DyadicPartition& part, const Field& gradv, double s, double p1,
                      double r, const std::string& branch) {
    if (branch == "B^{s-1}_{p1,r}")
        return besov_norm(part, gradv, {s - 1.0, p1, r}).total;
    const double b1 = besov_norm(part, gradv, {2.0 / p1, p1, kInf}).total;
    const double linf = lp_norm(gradv, kInf);
    return std::max(b1, linf);
}

double interp_series(const std::vector<std::pair<double, double>>& series, double t) {
    if (t <= series.front().first) return series.front().second;
    if (t >= series.back().first) return series.back().second;
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i].first >= t) {
            const auto& [t0, v0] = series[i - 1];
            const auto& [t1, v1] = series[i];
            const double w = (t - t0) / (t1 - t0);
            return v0 + w * (v1 - v0);
        }
    return series.back().second;
}

}  // namespace

std::vector<std::pair<double, double>> accumulate_v(const DyadicPartition& p,
                                                    const Trajectory& velocity, double s,
                                                    double p1, double r) {
    const std::string branch = select_v_branch(s, p1, r);
    std::vector<std::pair<double, double>> rates;
    for (const auto& snap : velocity.snapshots)
        rates.emplace_back(snap.t, v_branch_value(p, velocity_gradient(snap.f), s, p1, r, branch));
    std::vector<std::pair<double, double>> V;
    double acc = 0.0;
    V.emplace_back(rates.front().first, 0.0);
    for (std::size_t i = 1; i < rates.size(); ++i) {
        acc += 0.5 * (rates[i].first - rates[i - 1].first) *
               (rates[i].second + rates[i - 1].second);
        V.emplace_back(rates[i].first, acc);
    }
    return V;
}

TransportEstimateReport check_transport_estimate(const DyadicPartition& part,
                                                 const Trajectory& f, const Trajectory& velocity,
                                                 const Trajectory* forcing, const Field& f0,
                                                 double s, double p, double p1, double r,
                                                 double C0) {
    check_condition_210(s, p, p1, r);
    TransportEstimateReport rep;
    rep.C0 = C0;
    rep.v_branch = select_v_branch(s, p1, r);
    rep.V_series = accumulate_v(part, velocity, s, p1, r);

    const BesovParams bp{s, p, r};
    rep.lhs = chemin_lerner_norm(part, f, kInf, bp).total;
    rep.f0_norm = besov_norm(part, f0, bp).total;
    rep.V_total = rep.V_series.back().second;

    double forcing_int = 0.0;
    if (forcing != nullptr && !forcing->snapshots.empty()) {
        std::vector<double> ts, vals;
        for (const auto& snap : forcing->snapshots) {
            ts.push_back(snap.t);
            vals.push_back(std::exp(-C0 * interp_series(rep.V_series, snap.t)) *
                           besov_norm(part, snap.f, bp).total);
        }
        for (std::size_t i = 1; i < ts.size(); ++i)
            forcing_int += 0.5 * (ts[i] - ts[i - 1]) * (vals[i] + vals[i - 1]);
    }
    rep.forcing_term = forcing_int;
    rep.rhs = (rep.f0_norm + forcing_int) * std::exp(C0 * rep.V_total);
    rep.satisfied = rep.lhs <= rep.rhs;
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

TransportEstimateReport check_smoothing_estimate(const DyadicPartition& part,
                                                 const Trajectory& f, const Trajectory& velocity,
                                                 const Trajectory* forcing, const Field& f0,
                                                 double s, double p, double p1, double r,
                                                 double rho, double rho1, double nu, double C0) {
    check_condition_210(s, p, p1, r);
    if (!(rho1 >= 1.0 && rho >= rho1)) throw PreconditionError("need 1 <= rho1 <= rho <= inf");
    if (!(nu > 0.0)) throw PreconditionError("smoothing estimate needs nu > 0");

    TransportEstimateReport rep;
    rep.C0 = C0;
    rep.v_branch = select_v_branch(s, p1, r);
    rep.V_series = accumulate_v(part, velocity, s, p1, r);
    rep.V_total = rep.V_series.back().second;

    const double T = f.snapshots.back().t;
    const double inv_rho = rho == kInf ? 0.0 : 1.0 / rho;
    const double inv_rho1 = rho1 == kInf ? 0.0 : 1.0 / rho1;

    rep.lhs = std::pow(nu, inv_rho) *
              chemin_lerner_norm(part, f, rho, {s + 2.0 * inv_rho, p, r}).total;
    rep.f0_norm = besov_norm(part, f0, {s, p, r}).total;

    double forcing_norm = 0.0;
    if (forcing != nullptr && !forcing->snapshots.empty())
        forcing_norm =
            chemin_lerner_norm(part, *forcing, rho1, {s - 2.0 + 2.0 * inv_rho1, p, r}).total;
    rep.forcing_term = forcing_norm;

    const double growth = 1.0 + nu * T;
    rep.rhs = C0 * std::exp(C0 * std::pow(growth, inv_rho) * rep.V_total) *
              (std::pow(growth, inv_rho) * rep.f0_norm +
               std::pow(growth, 1.0 + inv_rho - inv_rho1) * std::pow(nu, inv_rho1 - 1.0) *
                   forcing_norm);
    rep.satisfied = rep.lhs <= rep.rhs;
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

double minimal_c0(const std::function<bool(double)>& satisfied_at, double hi) {
    if (satisfied_at(0.0)) return 0.0;
    if (!satisfied_at(hi)) return hi;
    double lo = 0.0, up = hi;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + up);
        (satisfied_at(mid) ? up : lo) = mid;
    }
    return up;
}

}  // namespace lpsw
