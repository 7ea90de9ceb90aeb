#include "lpsw/lab.hpp"

#include <cmath>

#include "lpsw/fft.hpp"
#include "lpsw/spectral_ops.hpp"

namespace lpsw {
namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t check_seed(const LabContext& ctx, const std::string& name, int trial) {
    return trial_seed(ctx.seed ^ fnv1a(name), static_cast<std::uint64_t>(trial));
}

Field trial_field(const LabContext& ctx, const std::string& name, int trial,
                  double amplitude = 1.0) {
    RandomFieldSpec spec;
    spec.beta = ctx.beta;
    spec.seed = check_seed(ctx, name, trial);
    spec.amplitude = amplitude;
    return random_field(ctx.grid, spec, &ctx.partition);
}

void push_sample(EstimateReport& rep, int trial, double lhs, double rhs) {
    if (rhs <= 0.0 || !std::isfinite(lhs / rhs)) {
        ++rep.skipped;
        return;
    }
    const double ratio = lhs / rhs;
    rep.samples.push_back({trial, lhs, rhs, ratio});
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
}

}  // namespace

LabContext LabContext::make(int n, double length, std::uint64_t seed, double beta) {
    LabContext ctx{make_grid(n, length), {}, beta, seed};
    ctx.partition = build_partition(ctx.grid);
    return ctx;
}

EstimateReport check_embedding(const LabContext& ctx, int trials, double s, double p1, double r1,
                               double p2, double r2) {
    if (!(p1 <= p2) || !(r1 <= r2))
        throw PreconditionError("embedding needs p1 <= p2 and r1 <= r2");
    EstimateReport rep;
    rep.name = "embedding";
    rep.params = {{"s", s}, {"p1", p1}, {"r1", r1}, {"p2", p2}, {"r2", r2}};
    const double s2 = s - 2.0 * (1.0 / p1 - 1.0 / p2);
    for (int i = 0; i < trials; ++i) {
        const Field u = trial_field(ctx, rep.name, i);
        const double lhs = besov_norm(ctx.partition, u, {s2, p2, r2}).total;
        const double rhs = besov_norm(ctx.partition, u, {s, p1, r1}).total;
        push_sample(rep, i, lhs, rhs);
    }
    rep.trials = trials;
    return rep;
}

EstimateReport check_gradient(const LabContext& ctx, int trials, double s, double p, double r) {
    EstimateReport rep;
    rep.name = "gradient";
    rep.params = {{"s", s}, {"p", p}, {"r", r}};
    for (int i = 0; i < trials; ++i) {
        const Field u = trial_field(ctx, rep.name, i);
        const double lhs = besov_norm(ctx.partition, gradient(u), {s - 1.0, p, r}).total;
        const double rhs = besov_norm(ctx.partition, u, {s, p, r}).total;
        push_sample(rep, i, lhs, rhs);
    }
    rep.trials = trials;
    return rep;
}

EstimateReport check_interpolation(const LabContext& ctx, int trials, double s1, double s2,
                                   double theta, double p, double r) {
    if (!(s1 < s2)) throw PreconditionError("interpolation needs s1 < s2");
    if (!(theta > 0.0 && theta < 1.0)) throw PreconditionError("interpolation needs theta in (0,1)");
    EstimateReport rep;
    rep.name = "interpolation";
    rep.params = {{"s1", s1}, {"s2", s2}, {"theta", theta}, {"p", p}, {"r", r}};
    const double smid = theta * s1 + (1.0 - theta) * s2;
    for (int i = 0; i < trials; ++i) {
        const Field u = trial_field(ctx, rep.name, i);
        const double lhs = besov_norm(ctx.partition, u, {smid, p, r}).total;
        const double a = besov_norm(ctx.partition, u, {s1, p, r}).total;
        const double b = besov_norm(ctx.partition, u, {s2, p, r}).total;
        push_sample(rep, i, lhs, std::pow(a, theta) * std::pow(b, 1.0 - theta));
    }
    rep.trials = trials;
    return rep;
}

EstimateReport check_linfty_embedding(const LabContext& ctx, int trials, double s, double p,
                                      double r) {
    if (!(s > 2.0 / p || (s == 2.0 / p && r == 1.0)))
        throw PreconditionError(
            "L-infinity embedding valid only for s > 2/p (or s = 2/p with r = 1); refusing to "
            "calibrate a constant outside its region");
    EstimateReport rep;
    rep.name = "linfty";
    rep.params = {{"s", s}, {"p", p}, {"r", r}};
    for (int i = 0; i < trials; ++i) {
        const Field u = trial_field(ctx, rep.name, i);
        const double lhs = lp_norm(u, kInf);
        const double rhs = besov_norm(ctx.partition, u, {s, p, r}).total;
        push_sample(rep, i, lhs, rhs);
    }
    rep.trials = trials;
    return rep;
}

EstimateReport check_composition(const LabContext& ctx, int trials, double s, double p, double r) {
    if (!(s > 0.0)) throw PreconditionError("composition estimate needs s > 0");
    EstimateReport rep;
    rep.name = "composition";
    rep.params = {{"s", s}, {"p", p}, {"r", r}};
    for (int i = 0; i < trials; ++i) {
        // amplitudes drawn in (0, 0.45]; the regime ||u||_inf <= 1/2 is
        // re-imposed by rescaling, never silently violated
        const double amp = 0.05 + 0.40 * ((check_seed(ctx, "composition-amp", i) >> 11) * 0x1.0p-53);
        Field u = trial_field(ctx, rep.name, i, amp);
        if (max_abs(u) > 0.5) {
            u = (0.45 / max_abs(u)) * u;
            ++rep.regenerated;
        }
        Field fu(u.grid(), 1);
        auto in = u.comp(0);
        auto out = fu.comp(0);
        for (std::size_t idx = 0; idx < in.size(); ++idx) out[idx] = std::log1p(in[idx]);
        const double lhs = besov_norm(ctx.partition, fu, {s, p, r}).total;
        const double rhs = besov_norm(ctx.partition, u, {s, p, r}).total;
        push_sample(rep, i, lhs, rhs);
    }
    rep.trials = trials;
    return rep;
}

EstimateReport check_paraproduct(const LabContext& ctx, int trials, double s, double t, double p,
                                 double r1, double r2) {
    if (!(t < 0.0)) throw PreconditionError("paraproduct second form needs t < 0");
    EstimateReport rep;
    rep.name = "paraproduct";
    rep.params = {{"s", s}, {"t", t}, {"p", p}, {"r1", r1}, {"r2", r2}};
    const double inv_r = std::min(1.0, 1.0 / r1 + 1.0 / r2);
    const double r_combined = inv_r == 0.0 ? kInf : 1.0 / inv_r;
    double worst_linf = 0.0, worst_negt = 0.0;
    for (int i = 0; i < trials; ++i) {
        const Field u = trial_field(ctx, rep.name + "-u", i);
        const Field v = trial_field(ctx, rep.name + "-v", i);
        const Field tuv = paraproduct(ctx.partition, u, v);
        // form 1: T bounded on L^inf x B^s_{p,r}
        {
            const double lhs = besov_norm(ctx.partition, tuv, {s, p, r2}).total;
            const double rhs = lp_norm(u, kInf) * besov_norm(ctx.partition, v, {s, p, r2}).total;
            push_sample(rep, i, lhs, rhs);
            if (rhs > 0.0) worst_linf = std::max(worst_linf, lhs / rhs);
        }
        // form 2: negative-regularity factor, RHS carries the structural 1/(-t)
        {
            const double lhs = besov_norm(ctx.partition, tuv, {s + t, p, r_combined}).total;
            const double rhs = besov_norm(ctx.partition, u, {t, kInf, r1}).total *
                               besov_norm(ctx.partition, v, {s, p, r2}).total / (-t);
            push_sample(rep, i, lhs, rhs);
            if (rhs > 0.0) worst_negt = std::max(worst_negt, lhs / rhs);
        }
    }
    rep.params["worst_linf_form"] = worst_linf;
    rep.params["worst_negt_form"] = worst_negt;
    rep.trials = trials;
    return rep;
}

EstimateReport check_remainder(const LabContext& ctx, int trials, double s1, double s2, double p1,
                               double p2, double r1, double r2) {
    const double inv_p = 1.0 / p1 + 1.0 / p2;
    const double inv_r = 1.0 / r1 + 1.0 / r2;
    if (inv_p > 1.0) throw PreconditionError("remainder needs 1/p1 + 1/p2 <= 1");
    const double ssum = s1 + s2;
    const bool strict = ssum > 0.0;
    if (!strict && !(ssum == 0.0 && inv_r >= 1.0))
        throw PreconditionError("remainder needs s1 + s2 > 0, or s1 + s2 = 0 with 1/r1 + 1/r2 >= 1");
    EstimateReport rep;
    rep.name = "remainder";
    rep.params = {{"s1", s1}, {"s2", s2}, {"p1", p1}, {"p2", p2}, {"r1", r1}, {"r2", r2}};
    const double p = inv_p == 0.0 ? kInf : 1.0 / inv_p;
    const double r = strict ? (inv_r >= 1.0 ? 1.0 : 1.0 / inv_r) : kInf;
    const double s_out = strict ? ssum : 0.0;
    for (int i = 0; i < trials; ++i) {
        const Field u = trial_field(ctx, rep.name + "-u", i);
        const Field v = trial_field(ctx, rep.name + "-v", i);
        const Field ruv = remainder(ctx.partition, u, v);
        const double lhs = besov_norm(ctx.partition, ruv, {s_out, p, r}).total;
        const double rhs = besov_norm(ctx.partition, u, {s1, p1, r1}).total *
                           besov_norm(ctx.partition, v, {s2, p2, r2}).total;
        push_sample(rep, i, lhs, rhs);
    }
    rep.trials = trials;
    return rep;
}

EstimateReport check_algebra(const LabContext& ctx, int trials, double s, double p, double r) {
    if (!(s > 2.0 / p || (s == 2.0 / p && r == 1.0)))
        throw PreconditionError("algebra property needs s > 2/p (or s = 2/p with r = 1)");
    EstimateReport rep;
    rep.name = "algebra";
    rep.params = {{"s", s}, {"p", p}, {"r", r}};
    for (int i = 0; i < trials; ++i) {
        const Field u = trial_field(ctx, rep.name + "-u", i);
        const Field v = trial_field(ctx, rep.name + "-v", i);
        const Field uv = pointwise_product(u, v);
        const double lhs = besov_norm(ctx.partition, uv, {s, p, r}).total;
        const double rhs = besov_norm(ctx.partition, u, {s, p, r}).total *
                           besov_norm(ctx.partition, v, {s, p, r}).total;
        push_sample(rep, i, lhs, rhs);
    }
    rep.trials = trials;
    return rep;
}

EstimateReport check_heat_smoothing(const LabContext& ctx, int trials, double nu, int j_block,
                                    double a, double b, double p, double q, double T) {
    if (j_block < 0)
        throw PreconditionError("heat check needs an annulus block j >= 0 (the ball j = -1 is not "
                                "an annulus)");
    if (j_block > ctx.partition.j_max()) throw PreconditionError("heat check: block out of range");
    if (!(a >= 1.0 && b >= a && p >= 1.0 && q >= p))
        throw PreconditionError("heat check needs 1 <= a <= b and 1 <= p <= q");
    if (!(nu > 0.0 && T > 0.0)) throw PreconditionError("heat check needs nu > 0 and T > 0");

    EstimateReport rep;
    rep.name = "heat";
    rep.params = {{"nu", nu},
                  {"j", static_cast<double>(j_block)},
                  {"a", a},
                  {"b", b},
                  {"p", p},
                  {"q", q},
                  {"T", T}};
    const Grid& g = ctx.grid;
    const double lambda = std::ldexp(1.0, j_block);
    const int nt = 64;

    for (int i = 0; i < trials; ++i) {
        SpectralField u0 =
            dyadic_block(ctx.partition, j_block, dft_forward(trial_field(ctx, "heat-u0", i)));
        SpectralField fh =
            dyadic_block(ctx.partition, j_block, dft_forward(trial_field(ctx, "heat-f", i)));
        const double u0a = lp_norm(dft_inverse(u0), a);
        const double fa = lp_norm(dft_inverse(fh), a);
        if (u0a == 0.0 && fa == 0.0) {
            ++rep.skipped;
            continue;
        }

        // exact per-mode evolution with constant-in-time forcing:
        // u^(t) = e^{-nu k^2 t} u0^ + f^ (1 - e^{-nu k^2 t}) / (nu k^2)
        std::vector<double> lb_vals(nt + 1), times(nt + 1);
        SpectralField ut(g, 1);
        auto u0c = u0.comp(0);
        auto fc = fh.comp(0);
        for (int it = 0; it <= nt; ++it) {
            const double t = T * it / nt;
            times[it] = t;
            auto uc = ut.comp(0);
            for (int qx = 0; qx < g.n; ++qx) {
                const double k1 = g.wavenumber(g.freq_index(qx));
                for (int qy = 0; qy < g.n; ++qy) {
                    const double k2 = g.wavenumber(g.freq_index(qy));
                    const std::size_t idx = static_cast<std::size_t>(qx) * g.n + qy;
                    const double kk = k1 * k1 + k2 * k2;
                    if (kk == 0.0) {
                        uc[idx] = u0c[idx] + t * fc[idx];
                    } else {
                        const double decay = std::exp(-nu * kk * t);
                        uc[idx] = decay * u0c[idx] + fc[idx] * ((1.0 - decay) / (nu * kk));
                    }
                }
            }
            lb_vals[it] = lp_norm(dft_inverse(ut), b);
        }

        double lhs;
        if (q == kInf) {
            lhs = 0.0;
            for (double v : lb_vals) lhs = std::max(lhs, v);
        } else {
            double sum = 0.0;
            for (int it = 0; it < nt; ++it)
                sum += 0.5 * (times[it + 1] - times[it]) *
                       (std::pow(lb_vals[it], q) + std::pow(lb_vals[it + 1], q));
            lhs = std::pow(sum, 1.0 / q);
        }

        const double fpa = p == kInf ? fa : std::pow(T, 1.0 / p) * fa;
        const double nl2 = nu * lambda * lambda;
        const double lam_ab = std::pow(lambda, 2.0 * (1.0 / a - 1.0 / b));
        const double inv_q = q == kInf ? 0.0 : 1.0 / q;
        const double inv_p = p == kInf ? 0.0 : 1.0 / p;
        const double rhs =
            std::pow(nl2, -inv_q) * lam_ab * u0a + std::pow(nl2, -1.0 + inv_p - inv_q) * lam_ab * fpa;
        push_sample(rep, i, lhs, rhs);
    }
    rep.trials = trials;
    return rep;
}

std::vector<std::string> lab_check_names() {
    return {"embedding",  "gradient",    "interpolation", "linfty", "composition",
            "paraproduct", "remainder",  "algebra",       "heat"};
}

EstimateReport run_named_check(const LabContext& ctx, const std::string& check, int trials,
                               const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (check == "embedding")
        return check_embedding(ctx, trials, get("s", 1.5), get("p1", 2), get("r1", 1), get("p2", 4),
                               get("r2", 2));
    if (check == "gradient") return check_gradient(ctx, trials, get("s", 2), get("p", 2), get("r", 2));
    if (check == "interpolation")
        return check_interpolation(ctx, trials, get("s1", 1), get("s2", 2), get("theta", 0.5),
                                   get("p", 2), get("r", 2));
    if (check == "linfty")
        return check_linfty_embedding(ctx, trials, get("s", 2), get("p", 2), get("r", 2));
    if (check == "composition")
        return check_composition(ctx, trials, get("s", 2), get("p", 2), get("r", 2));
    if (check == "paraproduct")
        return check_paraproduct(ctx, trials, get("s", 2), get("t", -0.5), get("p", 2),
                                 get("r1", 2), get("r2", 2));
    if (check == "remainder")
        return check_remainder(ctx, trials, get("s1", 1.2), get("s2", 0.8), get("p1", 4),
                               get("p2", 4), get("r1", 2), get("r2", 2));
    if (check == "algebra")
        return check_algebra(ctx, trials, get("s", 2), get("p", 2), get("r", 2));
    if (check == "heat")
        return check_heat_smoothing(ctx, trials, get("nu", 0.5), static_cast<int>(get("j", 1)),
                                    get("a", 2), get("b", 2), get("p", 2), get("q", 2), get("T", 1));
    throw ConfigError("unknown lab check '" + check + "'");
}

std::string Calibration::csp_key(double s, double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "s=%g,p=%g", s, p);
    return buf;
}

double Calibration::csp(double s, double p) const {
    auto it = Csp.find(csp_key(s, p));
    if (it == Csp.end())
        throw PreconditionError("calibration has no C_{s,p} entry for " + csp_key(s, p) +
                                "; re-run `lab calibrate`");
    return it->second;
}

Calibration calibrate(const LabContext& ctx, int trials) {
    Calibration cal;
    cal.seed = ctx.seed;
    cal.trials = trials;
    cal.grid_n = ctx.grid.n;
    cal.grid_length = ctx.grid.length;

    for (const auto& [s, p, r] : std::vector<std::array<double, 3>>{{2, 2, 2}, {1.6, 2, 1}}) {
        const auto rep = check_linfty_embedding(ctx, trials, s, p, r);
        cal.Csp[Calibration::csp_key(s, p)] = rep.worst_ratio;
    }

    double cb = 0.0;
    cb = std::max(cb, check_paraproduct(ctx, trials, 2, -0.5, 2, 2, 2).worst_ratio);
    cb = std::max(cb, check_remainder(ctx, trials, 1.2, 0.8, 4, 4, 2, 2).worst_ratio);
    cb = std::max(cb, check_algebra(ctx, trials, 2, 2, 2).worst_ratio);
    cb = std::max(cb, check_composition(ctx, trials, 2, 2, 2).worst_ratio);
    cal.C_bony = cb;

    cal.heat_C = check_heat_smoothing(ctx, trials, 0.5, 1, 2, 2, 2, 2, 1.0).worst_ratio;

    // transport / transport-diffusion estimates on a shear-flow ensemble:
    // calibrated C0 is the largest minimal constant over the ensemble with
    // a 1.25 safety margin.
    const int members = std::max(6, trials / 8);
    const Field shear = shear_flow(ctx.grid, 1.0);
    const Trajectory vel = static_trajectory(shear, 1.0);
    double c0 = 0.0;
    const std::vector<std::array<double, 4>> combos = {{2, 2, 4, 2}, {1.6, 2, 2, 1}};
    for (int i = 0; i < members; ++i) {
        RandomFieldSpec spec;
        spec.beta = ctx.beta;
        spec.seed = check_seed(ctx, "calibrate-transport", i);
        spec.amplitude = 1.0;
        const Field f0 = random_field(ctx.grid, spec, &ctx.partition);

        LinearProblem tp;
        tp.f0 = f0;
        tp.nu = 0.0;
        tp.T = 1.0;
        tp.velocity = shear;
        const Trajectory traj_t = solve_transport(tp);

        LinearProblem td = tp;
        td.nu = 0.3;
        const Trajectory traj_d = solve_transport_diffusion(td);

        for (const auto& [s, p, p1, r] : combos) {
            c0 = std::max(c0, minimal_c0([&](double c) {
                return check_transport_estimate(ctx.partition, traj_t, vel, nullptr, f0, s, p, p1,
                                                r, c)
                    .satisfied;
            }));
            c0 = std::max(c0, minimal_c0([&](double c) {
                return check_smoothing_estimate(ctx.partition, traj_d, vel, nullptr, f0, s, p, p1,
                                                r, 2.0, 2.0, td.nu, c)
                    .satisfied;
            }));
        }
    }
    cal.C0 = 1.25 * c0;
    return cal;
}

}  // namespace lpsw
