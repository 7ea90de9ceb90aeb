#include "lpsw/swe.hpp"

#include <cmath>
#include <memory>

#include "lpsw/fft.hpp"
#include "lpsw/kernels.hpp"
#include "lpsw/spectral_ops.hpp"

namespace lpsw {

void validate(const SWConfig& cfg) {
    std::vector<std::string> bad;
    if (!(cfg.nu > 0.0 && cfg.nu < 1.0))
        bad.push_back("viscosity nu must lie in (0, 1), got " + std::to_string(cfg.nu));
    if (!(cfg.params.p >= 1.0 && cfg.params.r >= 1.0)) bad.push_back("need p >= 1 and r >= 1");
    if (!(cfg.params.s > std::max(1.0, 2.0 / cfg.params.p)))
        bad.push_back("need s > max(1, 2/p), got s = " + std::to_string(cfg.params.s));
    if (cfg.u0.empty() || cfg.u0.components() != 2)
        bad.push_back("u0 must be a 2-component field");
    if (cfg.h0.empty() || cfg.h0.components() != 1)
        bad.push_back("h0 must be a scalar field");
    if (!cfg.u0.empty() && !(cfg.u0.grid() == cfg.grid)) bad.push_back("u0 grid mismatch");
    if (!cfg.h0.empty() && !(cfg.h0.grid() == cfg.grid)) bad.push_back("h0 grid mismatch");
    if (!cfg.h0.empty() && !(max_abs(cfg.h0) < 1.0))
        bad.push_back("need ||h0||_inf < 1 so the total height 1 + h0 stays positive");
    if (cfg.n_iters < 1) bad.push_back("n_iters must be >= 1");
    if (!bad.empty()) throw ConfigError(bad);
}

namespace {

// One frozen (u, h) stage state with everything the linearised equations
// read from it: sample values and the assembled forcing terms.
struct FrozenStage {
    Field u;  // samples, 2 components
    Field h;  // samples, 1 component
    SpectralField momentum_force;
    SpectralField height_force;
};

// momentum forcing  nu P(q . P((grad h . grad) u)) -/+ grad h   with
// q = P(1/(1+h));  height forcing  -div u - P(h div u).
FrozenStage make_frozen(const SpectralField& uh, const SpectralField& hh, double nu,
                        bool printed_sign, double t) {
    FrozenStage fz;
    fz.u = dft_inverse(uh);
    fz.h = dft_inverse(hh);

    double hmin = kInf;
    for (double v : fz.h.comp(0)) hmin = std::min(hmin, 1.0 + v);
    if (!(hmin >= 0.5)) throw RegimeExitError(t, hmin);

    const Grid& g = uh.grid();
    const SpectralField grad_h = gradient(hh);
    const Field gh = dft_inverse(grad_h);

    Field q(g, 1);
    {
        auto hv = fz.h.comp(0);
        auto qv = q.comp(0);
        for (std::size_t i = 0; i < hv.size(); ++i) qv[i] = 1.0 / (1.0 + hv[i]);
        SpectralField qhat = dft_forward(q);
        dealias_inplace(qhat);
        q = dft_inverse(qhat);
    }

    Field force(g, 2);
    for (int c = 0; c < 2; ++c) {
        SpectralField uc(g, 1);
        std::copy(uh.comp(c).begin(), uh.comp(c).end(), uc.comp(0).begin());
        const Field grad_uc = dft_inverse(gradient(uc));
        const Field dot = banded_product(gh, grad_uc);   // (grad h . grad) u_c
        const Field scaled = banded_product(q, dot);
        auto out = force.comp(c);
        auto sv = scaled.comp(0);
        auto gv = gh.comp(c);
        const double sign = printed_sign ? 1.0 : -1.0;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = nu * sv[i] + sign * gv[i];
    }
    fz.momentum_force = dft_forward(force);
    dealias_inplace(fz.momentum_force);

    const Field div_u = dft_inverse(divergence(uh));
    const Field h_div = banded_product(fz.h, div_u);
    Field hforce(g, 1);
    {
        auto out = hforce.comp(0);
        auto dv = div_u.comp(0);
        auto hd = h_div.comp(0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -dv[i] - hd[i];
    }
    fz.height_force = dft_forward(hforce);
    dealias_inplace(fz.height_force);
    return fz;
}

double stage_time(int step, int stage, double dt) {
    const double off = stage == 0 ? 0.0 : (stage == 3 ? 1.0 : 0.5);
    return (step + off) * dt;
}

// Lazily materialised frozen stages of the previous iterate.
class FrozenCache {
  public:
    FrozenCache(const StageRecord& u, const StageRecord& h, double nu, bool printed_sign)
        : u_(&u), h_(&h), nu_(nu), sign_(printed_sign), cache_(u.states.size()) {}

    const FrozenStage& get(int step, int stage) {
        auto& slot = cache_.at(step)[stage];
        if (!slot)
            slot = std::make_unique<FrozenStage>(make_frozen(u_->states[step][stage],
                                                             h_->states[step][stage], nu_, sign_,
                                                             stage_time(step, stage, u_->dt)));
        return *slot;
    }

  private:
    const StageRecord* u_;
    const StageRecord* h_;
    double nu_;
    bool sign_;
    std::vector<std::array<std::unique_ptr<FrozenStage>, 4>> cache_;
};

SpectralField dealiased_forward(const Field& f) {
    SpectralField out = dft_forward(f);
    dealias_inplace(out);
    return out;
}

void compute_iterate_norms(IterateData& it, const DyadicPartition& part, const BesovParams& bp,
                           const IterationBudget& budget) {
    const BlockSeries su = block_lp_series(part, it.u, bp.p);
    const BlockSeries sh = block_lp_series(part, it.h, bp.p);
    it.u_linf_bs = chemin_lerner_from_series(su, kInf, {bp.s, bp.p, bp.r}).total;
    it.u_l2_bs1 = chemin_lerner_from_series(su, 2.0, {bp.s + 1.0, bp.p, bp.r}).total;
    it.h_linf_bs = chemin_lerner_from_series(sh, kInf, {bp.s, bp.p, bp.r}).total;
    it.chi_member =
        it.u_linf_bs <= budget.E1 && it.u_l2_bs1 <= budget.E1 && it.h_linf_bs <= budget.E2;
}

}  // namespace

IterationBudget compute_budgets(const SWConfig& cfg, const DyadicPartition& part) {
    validate(cfg);
    const Calibration& cal = cfg.constants;
    if (!(cal.C0 > 0.0))
        throw PreconditionError("calibrated constants missing (C0 <= 0); run `lab calibrate`");
    const double csp = cal.csp(cfg.params.s, cfg.params.p);

    const double u0n = besov_norm(part, cfg.u0, cfg.params).total;
    const double h0n = besov_norm(part, cfg.h0, cfg.params).total;
    const double smallness = 1.0 / (8.0 * cal.C0 * csp);
    if (!(h0n <= smallness))
        throw PreconditionError("smallness violated: ||h0||_B = " + std::to_string(h0n) +
                                " exceeds 1/(8 C0 C_{s,p}) = " + std::to_string(smallness));

    IterationBudget b;
    b.E1 = 8.0 * cal.C0 * u0n / cfg.nu;
    b.E2 = 4.0 * cal.C0 * h0n;

    // big-norm window: T <= 1, exp(C0^2 E1 T) <= 2, exp(2 C0 Csp E1 T) <= 2,
    // (1 + nu T)^{3/2} <= 2; each threshold is closed-form.
    double t1 = std::min(1.0, (std::cbrt(4.0) - 1.0) / cfg.nu);
    if (b.E1 > 0.0) {
        t1 = std::min(t1, std::log(2.0) / (cal.C0 * cal.C0 * b.E1));
        t1 = std::min(t1, std::log(2.0) / (2.0 * cal.C0 * csp * b.E1));
    }
    b.T1 = t1;

    // contraction window conditions, verified by bisection over T <= T1
    const double C = std::max(cal.C_bony, 1e-12);
    const double s = cfg.params.s, p = cfg.params.p;
    const double e1 = b.E1, e2 = b.E2;
    auto conditions_hold = [&](double T) {
        const double a1 = C * (1.0 + e1 + e1 * e2 + e1 * e2 * e2) *
                          (std::pow(T, s / 2.0 - 1.0 / p) + std::sqrt(T) +
                           std::pow(T, (s - 1.0) / 2.0));
        const double a2 = C * (e1 + e2) *
                          (std::sqrt(T) + std::pow(T, s - 2.0 / p) + std::pow(T, (s - 1.0) / 2.0));
        const double a3 = C * (1.0 + e2) * std::sqrt(T);
        const double a4 = C * e1 * std::sqrt(T);
        return a1 <= 1.0 / 12.0 && a2 <= 1.0 / 12.0 && a3 <= 1.0 / 12.0 && a4 <= 1.0 / 12.0;
    };
    if (conditions_hold(b.T1)) {
        b.T2 = b.T1;
    } else {
        double lo = 0.0, hi = b.T1;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (conditions_hold(mid) ? lo : hi) = mid;
        }
        b.T2 = lo;
    }
    if (!(b.T2 > 0.0) || !conditions_hold(b.T2))
        throw PreconditionError("no positive contraction window satisfies the conditions");
    return b;
}

std::pair<Field, Field> initial_truncation(const SWConfig& cfg, const DyadicPartition& part,
                                           int n) {
    if (n < 0) throw PreconditionError("initial_truncation requires n >= 0");
    return {low_freq_cutoff(part, n + 2, cfg.u0), low_freq_cutoff(part, n + 2, cfg.h0)};
}

namespace {

StageRecord constant_stage_record(const SpectralField& f, int steps, double dt) {
    StageRecord rec;
    rec.dt = dt;
    rec.states.assign(steps, {f, f, f, f});
    return rec;
}

Trajectory constant_trajectory(const Field& f, int steps, double dt) {
    Trajectory traj;
    traj.meta.scheme = "seed";
    traj.meta.dt = dt;
    traj.meta.cadence = 1;
    for (int i = 0; i <= steps; ++i) traj.snapshots.push_back({i * dt, f});
    return traj;
}

}  // namespace

IterateData seed_iterate(const SWConfig& cfg, const DyadicPartition& part,
                         const IterationBudget& budget, double T, double dt) {
    const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
    const double dt_eff = T / steps;
    auto [u1, h1] = initial_truncation(cfg, part, 0);  // S_2 (u0, h0)
    IterateData it;
    it.index = 1;
    it.u = constant_trajectory(u1, steps, dt_eff);
    it.h = constant_trajectory(h1, steps, dt_eff);
    it.u_stages = constant_stage_record(dealiased_forward(u1), steps, dt_eff);
    it.h_stages = constant_stage_record(dealiased_forward(h1), steps, dt_eff);
    compute_iterate_norms(it, part, cfg.params, budget);
    return it;
}

IterateData picard_step(const IterateData& prev, const SWConfig& cfg, const DyadicPartition& part,
                        const IterationBudget& budget) {
    const double dt = prev.u_stages.dt;
    const int steps = static_cast<int>(prev.u_stages.states.size());
    const double T = steps * dt;

    double vmax = 0.0;
    for (const auto& s : prev.u.snapshots) vmax = std::max(vmax, max_abs(s.f));
    if (vmax > 0.0) {
        const double dt_max = kCflSafety * cfg.grid.spacing() / vmax;
        if (dt > dt_max) throw CflError(dt, dt_max);
    }

    FrozenCache cache(prev.u_stages, prev.h_stages, cfg.nu, cfg.printed_gradh_sign);
    auto [u_init, h_init] = initial_truncation(cfg, part, prev.index);

    IntegratorOptions uopts;
    uopts.T = T;
    uopts.dt = dt;
    uopts.nu = cfg.nu;
    uopts.snapshot_cadence = 1;
    uopts.record_stages = true;
    DerivFn urhs = [&cache](double /*t*/, int step, int stage, const SpectralField& y) {
        const FrozenStage& fz = cache.get(step, stage);
        SpectralField out = advection_term(fz.u, y);
        out += fz.momentum_force;
        return out;
    };
    IntegrationResult ures = integrate_ifrk4(dealiased_forward(u_init), urhs, uopts);

    IntegratorOptions hopts = uopts;
    hopts.nu = 0.0;
    DerivFn hrhs = [&cache](double /*t*/, int step, int stage, const SpectralField& y) {
        const FrozenStage& fz = cache.get(step, stage);
        SpectralField out = advection_term(fz.u, y);
        out += fz.height_force;
        return out;
    };
    IntegrationResult hres = integrate_ifrk4(dealiased_forward(h_init), hrhs, hopts);

    IterateData it;
    it.index = prev.index + 1;
    it.u = std::move(ures.traj);
    it.h = std::move(hres.traj);
    it.u_stages = std::move(ures.stages);
    it.h_stages = std::move(hres.stages);
    compute_iterate_norms(it, part, cfg.params, budget);
    return it;
}

namespace {

double iterate_delta(const DyadicPartition& part, const IterateData& cur, const IterateData& prev,
                     const BesovParams& bp) {
    const Trajectory du = trajectory_difference(cur.u, prev.u);
    const Trajectory dh = trajectory_difference(cur.h, prev.h);
    const BlockSeries su = block_lp_series(part, du, bp.p);
    const BlockSeries sh = block_lp_series(part, dh, bp.p);
    return chemin_lerner_from_series(su, kInf, {bp.s - 1.0, bp.p, bp.r}).total +
           chemin_lerner_from_series(su, 2.0, {bp.s, bp.p, bp.r}).total +
           chemin_lerner_from_series(sh, kInf, {bp.s - 1.0, bp.p, bp.r}).total;
}

}  // namespace

IterationReport run_iteration(const SWConfig& cfg) {
    validate(cfg);
    const DyadicPartition part = build_partition(cfg.grid);
    IterationReport report;
    report.budget = compute_budgets(cfg, part);
    report.T = cfg.T > 0.0 ? cfg.T : report.budget.T2;
    report.dt = cfg.dt > 0.0 ? cfg.dt : report.T / 32.0;

    IterateData cur = seed_iterate(cfg, part, report.budget, report.T, report.dt);
    report.dt = cur.u_stages.dt;
    report.rows.push_back({1, cur.u_linf_bs, cur.u_l2_bs1, cur.h_linf_bs, cur.chi_member, 0.0});

    std::vector<double> deltas;  // deltas[i] = delta_{i+2}
    for (int n = 2; n <= cfg.n_iters; ++n) {
        IterateData next = picard_step(cur, cfg, part, report.budget);
        const double delta = iterate_delta(part, next, cur, cfg.params);
        deltas.push_back(delta);
        report.rows.push_back(
            {n, next.u_linf_bs, next.u_l2_bs1, next.h_linf_bs, next.chi_member, delta});
        cur = std::move(next);
    }
    report.delta_last = deltas.empty() ? 0.0 : deltas.back();

    // geometric ratio fitted on the deltas above the rounding floor
    report.delta_floor = 1e-14 * std::max(report.budget.E1 + report.budget.E2, 1e-30);
    std::vector<std::pair<double, double>> pts;  // (n, log delta)
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (deltas[i] > report.delta_floor)
            pts.emplace_back(static_cast<double>(i + 2), std::log(deltas[i]));
    report.q_points = static_cast<int>(pts.size());
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double m = pts.size();
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        report.contraction_q = std::exp(slope);
    } else {
        report.contraction_q = 0.0;  // contracted to the floor immediately
    }
    report.non_contraction = report.contraction_q >= 1.0;

    report.residual = fixed_point_residual(cfg, part, cur.u, cur.h);

    const DirectResult direct = direct_solve(cfg, report.T, report.dt, 1);
    {
        const Trajectory du = trajectory_difference(cur.u, direct.u);
        const Trajectory dh = trajectory_difference(cur.h, direct.h);
        const BesovParams gm{cfg.params.s - 1.0, cfg.params.p, cfg.params.r};
        report.gap_u = chemin_lerner_norm(part, du, kInf, gm).total;
        report.gap_h = chemin_lerner_norm(part, dh, kInf, gm).total;
    }
    return report;
}

DirectResult direct_solve(const SWConfig& cfg, double horizon, double dt, int cadence,
                          bool record_stages, bool regime_exit_throws) {
    validate(cfg);
    if (!(horizon > 0.0)) throw ConfigError("direct_solve horizon must be positive");

    const Grid& g = cfg.grid;
    const double vmax = max_abs(cfg.u0);
    if (dt == 0.0) {
        // explicit treatment of the gravity-wave coupling: resolve
        // k_max (1 + |u|) with ample margin, and the advective CFL
        const double kmax = std::sqrt(2.0) * g.dk() * g.dealias_cutoff();
        dt = 0.5 / (kmax * (1.0 + vmax));
        if (vmax > 0.0) dt = std::min(dt, kCflSafety * g.spacing() / vmax);
        dt = std::min(dt, horizon);
    } else if (vmax > 0.0 && dt > kCflSafety * g.spacing() / vmax) {
        throw CflError(dt, kCflSafety * g.spacing() / vmax);
    }

    const int steps = std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9)));
    dt = horizon / steps;

    const std::vector<double> e_half = heat_multiplier(g, cfg.nu, dt / 2.0);
    const std::vector<double> e_full = heat_multiplier(g, cfg.nu, dt);
    auto apply = [&](SpectralField& y, const std::vector<double>& tab) {
        for (int c = 0; c < y.components(); ++c)
            kernels::active().mul_table(reinterpret_cast<double*>(y.comp(c).data()), tab.data(),
                                        g.size());
    };
    auto scaled = [&](const SpectralField& y, const std::vector<double>& tab) {
        SpectralField out = y;
        apply(out, tab);
        return out;
    };

    DirectResult res;
    res.u.meta = {"ifrk4", dt, cfg.nu, "direct", cadence};
    res.h.meta = {"rk4", dt, 0.0, "direct", cadence};
    if (record_stages) {
        res.u_stages.emplace();
        res.h_stages.emplace();
        res.u_stages->dt = dt;
        res.h_stages->dt = dt;
    }

    SpectralField yu = dealiased_forward(cfg.u0);
    SpectralField yh = dealiased_forward(cfg.h0);

    auto coupled_rhs = [&](const SpectralField& su, const SpectralField& sh, double t,
                           SpectralField& nu_out, SpectralField& nh_out) {
        const FrozenStage fz = make_frozen(su, sh, cfg.nu, cfg.printed_gradh_sign, t);
        nu_out = advection_term(fz.u, su);
        nu_out += fz.momentum_force;
        nh_out = advection_term(fz.u, sh);
        nh_out += fz.height_force;
    };

    auto snapshot = [&](double t) {
        Field uf = dft_inverse(yu);
        Field hf = dft_inverse(yh);
        res.mass_series.emplace_back(t, integral(hf));
        res.u.snapshots.push_back({t, std::move(uf)});
        res.h.snapshots.push_back({t, std::move(hf)});
    };
    snapshot(0.0);

    for (int step = 0; step < steps; ++step) {
        const double t = step * dt;
        try {
            SpectralField nu1(g, 2), nh1(g, 1), nu2(g, 2), nh2(g, 1), nu3(g, 2), nh3(g, 1),
                nu4(g, 2), nh4(g, 1);
            coupled_rhs(yu, yh, t, nu1, nh1);

            SpectralField yu2 = yu;
            axpy(yu2, dt / 2.0, nu1);
            apply(yu2, e_half);
            SpectralField yh2 = yh;
            axpy(yh2, dt / 2.0, nh1);
            coupled_rhs(yu2, yh2, t + dt / 2.0, nu2, nh2);

            SpectralField yu3 = scaled(yu, e_half);
            axpy(yu3, dt / 2.0, nu2);
            SpectralField yh3 = yh;
            axpy(yh3, dt / 2.0, nh2);
            coupled_rhs(yu3, yh3, t + dt / 2.0, nu3, nh3);

            SpectralField yu4 = scaled(yu, e_full);
            SpectralField en3 = scaled(nu3, e_half);
            axpy(yu4, dt, en3);
            SpectralField yh4 = yh;
            axpy(yh4, dt, nh3);
            coupled_rhs(yu4, yh4, t + dt, nu4, nh4);

            if (record_stages) {
                res.u_stages->states.push_back({yu, std::move(yu2), std::move(yu3), std::move(yu4)});
                res.h_stages->states.push_back({yh, std::move(yh2), std::move(yh3), std::move(yh4)});
            }

            SpectralField yu_new = yu;
            axpy(yu_new, dt / 6.0, nu1);
            apply(yu_new, e_full);
            apply(nu2, e_half);
            apply(nu3, e_half);
            axpy(yu_new, dt / 3.0, nu2);
            axpy(yu_new, dt / 3.0, nu3);
            axpy(yu_new, dt / 6.0, nu4);
            yu = std::move(yu_new);

            SpectralField yh_new = yh;
            axpy(yh_new, dt / 6.0, nh1);
            axpy(yh_new, dt / 3.0, nh2);
            axpy(yh_new, dt / 3.0, nh3);
            axpy(yh_new, dt / 6.0, nh4);
            yh = std::move(yh_new);
        } catch (const RegimeExitError& e) {
            if (regime_exit_throws) throw;
            res.regime_exit_time = e.time;
            break;
        }

        if (!all_finite(yu) || !all_finite(yh)) throw DivergenceError((step + 1) * dt);

        const bool last = step + 1 == steps;
        if (last || (step + 1) % cadence == 0) snapshot((step + 1) * dt);
    }

    double m0 = res.mass_series.front().second;
    double drift = 0.0;
    for (const auto& [t, m] : res.mass_series) drift = std::max(drift, std::abs(m - m0));
    const double scale = std::max(std::abs(m0), lp_norm(cfg.h0, 1.0));
    res.mass_drift_rel = scale > 0.0 ? drift / scale : drift;
    return res;
}

DivergenceReport uniqueness_probe(const SWConfig& a, const SWConfig& b, double horizon,
                                  double dt) {
    validate(a);
    validate(b);
    std::vector<std::string> bad;
    if (!(a.grid == b.grid)) bad.push_back("uniqueness probe: grids differ");
    if (a.nu != b.nu) bad.push_back("uniqueness probe: nu differs");
    if (a.params.s != b.params.s || a.params.p != b.params.p || a.params.r != b.params.r)
        bad.push_back("uniqueness probe: Besov parameters differ");
    if (!bad.empty()) throw ConfigError(bad);

    const DyadicPartition part = build_partition(a.grid);
    if (dt == 0.0) {
        // shared step so the snapshots align
        const double kmax = std::sqrt(2.0) * a.grid.dk() * a.grid.dealias_cutoff();
        const double vmax = std::max(max_abs(a.u0), max_abs(b.u0));
        dt = std::min(0.5 / (kmax * (1.0 + vmax)), horizon);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9)));
    const int cadence = std::max(1, steps / 16);
    const DirectResult ra = direct_solve(a, horizon, dt, cadence);
    const DirectResult rb = direct_solve(b, horizon, dt, cadence);

    DivergenceReport rep;
    const BesovParams bp = a.params;
    rep.initial_gap = besov_norm(part, a.u0 - b.u0, bp).total + besov_norm(part, a.h0 - b.h0, bp).total;
    for (std::size_t i = 0; i < ra.u.snapshots.size(); ++i) {
        const double t = ra.u.snapshots[i].t;
        const double gap =
            besov_norm(part, ra.u.snapshots[i].f - rb.u.snapshots[i].f, bp).total +
            besov_norm(part, ra.h.snapshots[i].f - rb.h.snapshots[i].f, bp).total;
        rep.gap_series.emplace_back(t, gap);
    }
    rep.final_gap = rep.gap_series.back().second;
    rep.growth = rep.initial_gap > 0.0 ? rep.final_gap / rep.initial_gap : 0.0;
    return rep;
}

double gronwall_rho2(double s, double p, double eps) {
    const double s1 = s - 2.0 / p + 1.0 - eps;
    if (!(s1 > 1.0))
        throw PreconditionError("need s - eps > 2/p so that s1 > 1; adjust eps");
    const double theta = (s1 - 1.0) / 2.0;        // interpolation to H^{(s1+3)/2}
    const double rho1 = 2.0 / (1.0 - theta);
    const double rho = 0.5 * (2.0 + rho1);
    return 1.0 / (1.0 / rho - 1.0 / rho1);
}

namespace {

// principal Lambert W on x >= 0 by Newton iteration
double lambert_w(double x) {
    if (x == 0.0) return 0.0;
    double w = std::log1p(x);
    for (int i = 0; i < 64; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double step = f / (ew * (1.0 + w));
        w -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

}  // namespace

GlobalReport global_run(const SWConfig& cfg, double horizon, double checkpoint_every) {
    validate(cfg);
    if (!(cfg.params.p <= 2.0))
        throw PreconditionError("global runs are restricted to p <= 2");
    const DyadicPartition part = build_partition(cfg.grid);
    const double data_norm =
        besov_norm(part, cfg.u0, cfg.params).total + besov_norm(part, cfg.h0, cfg.params).total;
    if (!(data_norm <= cfg.eta * (1.0 + 1e-12)))
        throw PreconditionError("global run requires ||u0|| + ||h0|| <= eta = " +
                                std::to_string(cfg.eta) + ", got " + std::to_string(data_norm));

    GlobalReport rep;
    rep.horizon = horizon;
    rep.s1 = cfg.params.s - 2.0 / cfg.params.p + 1.0 - cfg.eps;
    rep.rho2 = gronwall_rho2(cfg.params.s, cfg.params.p, cfg.eps);

    const double kmax = std::sqrt(2.0) * cfg.grid.dk() * cfg.grid.dealias_cutoff();
    double dt = cfg.dt > 0.0 ? cfg.dt : 0.5 / (kmax * (1.0 + max_abs(cfg.u0)));
    const int cadence = std::max(1, static_cast<int>(std::round(checkpoint_every / dt)));

    const DirectResult run =
        direct_solve(cfg, horizon, dt, cadence, /*record_stages=*/false,
                     /*regime_exit_throws=*/false);
    rep.dt = run.u.meta.dt;
    rep.mass_drift_rel = run.mass_drift_rel;
    if (run.regime_exit_time) {
        rep.regime_exit = true;
        rep.regime_exit_time = *run.regime_exit_time;
    }

    double l2acc = 0.0;
    double prev_t = 0.0, prev_sq = 0.0;
    double sup_sum = 0.0;
    for (std::size_t i = 0; i < run.u.snapshots.size(); ++i) {
        const double t = run.u.snapshots[i].t;
        GlobalReport::Checkpoint cp;
        cp.t = t;
        cp.u_bs = besov_norm(part, run.u.snapshots[i].f, cfg.params).total;
        cp.h_bs = besov_norm(part, run.h.snapshots[i].f, cfg.params).total;
        cp.u_hs1 = sobolev_norm(run.u.snapshots[i].f, rep.s1);
        const double hs1p1 = sobolev_norm(run.u.snapshots[i].f, rep.s1 + 1.0);
        const double sq = hs1p1 * hs1p1;
        if (i > 0) l2acc += 0.5 * (t - prev_t) * (sq + prev_sq);
        prev_t = t;
        prev_sq = sq;
        cp.u_l2t_hs1p1 = std::sqrt(l2acc);
        sup_sum = std::max(sup_sum, cp.u_bs + cp.h_bs);
        cp.sup_sum = sup_sum;
        rep.checkpoints.push_back(cp);
    }

    // envelope (sup norms)^{rho2} <= C e^{C t}: fit the minimal C on the
    // first half of the horizon, verify on the second half
    double C = 0.0;
    for (const auto& cp : rep.checkpoints) {
        if (cp.t > horizon / 2.0) break;
        const double Y = std::pow(cp.sup_sum, rep.rho2);
        C = std::max(C, cp.t == 0.0 ? Y : lambert_w(Y * cp.t) / cp.t);
    }
    rep.envelope_C = C;
    rep.envelope_ok = true;
    for (const auto& cp : rep.checkpoints) {
        if (cp.t <= horizon / 2.0) continue;
        const double Y = std::pow(cp.sup_sum, rep.rho2);
        if (Y > C * std::exp(C * cp.t) * (1.0 + 1e-9) + 1e-300) rep.envelope_ok = false;
    }
    return rep;
}

double fixed_point_residual(const SWConfig& cfg, const DyadicPartition& part, const Trajectory& u,
                            const Trajectory& h, int probes) {
    if (u.snapshots.size() < 2) return 0.0;
    const BesovParams bp{cfg.params.s - 2.0, cfg.params.p, cfg.params.r};
    const int pairs = static_cast<int>(u.snapshots.size()) - 1;
    const int stride = std::max(1, pairs / probes);
    double worst = 0.0;
    for (int i = 0; i < pairs; i += stride) {
        const double delta = u.snapshots[i + 1].t - u.snapshots[i].t;
        const Field um = 0.5 * (u.snapshots[i].f + u.snapshots[i + 1].f);
        const Field hm = 0.5 * (h.snapshots[i].f + h.snapshots[i + 1].f);
        SpectralField umh = dealiased_forward(um);
        SpectralField hmh = dealiased_forward(hm);

        const FrozenStage fz = make_frozen(umh, hmh, cfg.nu, cfg.printed_gradh_sign,
                                           u.snapshots[i].t);
        SpectralField ru = dealiased_forward((1.0 / delta) * (u.snapshots[i + 1].f - u.snapshots[i].f));
        ru -= advection_term(fz.u, umh);
        ru -= fz.momentum_force;
        SpectralField lap = laplacian(umh);
        axpy(ru, -cfg.nu, lap);

        SpectralField rh = dealiased_forward((1.0 / delta) * (h.snapshots[i + 1].f - h.snapshots[i].f));
        rh -= advection_term(fz.u, hmh);
        rh -= fz.height_force;

        worst = std::max(worst, besov_norm(part, ru, bp).total + besov_norm(part, rh, bp).total);
    }
    return worst;
}

}  // namespace lpsw
