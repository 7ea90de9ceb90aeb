// lpsw: Littlewood-Paley / Besov toolkit for the 2D viscous shallow water
// system on a periodic box. Subcommands:
//   lp     dump-partition
//   norm   besov | lp | sobolev
//   lab    run | calibrate
//   solve  transport | tdiff
//   swe    iterate | direct | global | probe
// Exit codes: 0 success, 1 error, 2 regime exit or diagnostic failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "lpsw/config.hpp"
#include "lpsw/spectral_ops.hpp"

namespace fs = std::filesystem;
using namespace lpsw;

namespace {

struct GlobalFlags {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string constants_path;
    bool force = false;
};

std::string out_path(const GlobalFlags& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

Calibration required_constants(const GlobalFlags& g) {
    if (g.constants_path.empty())
        throw ConfigError("this subcommand needs --constants <calibration.json> "
                          "(produce one with `lpsw lab calibrate`)");
    return load_calibration(g.constants_path);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--param expects key=value, got '" + kv + "'");
        const std::string val = kv.substr(eq + 1);
        out[kv.substr(0, eq)] = val == "inf" ? kInf : std::stod(val);
    }
    return out;
}

int cmd_dump_partition(const GlobalFlags& g, int n, double length, int j_max,
                       const std::string& out) {
    const Grid grid = make_grid(n, length);
    const DyadicPartition part =
        j_max >= 0 ? build_partition(grid, j_max) : build_partition(grid);
    std::vector<std::vector<double>> rows;
    for (int j = -1; j <= part.j_max(); ++j) {
        const auto& table = part.block_table(j);
        for (int qx = 0; qx < grid.n; ++qx) {
            const double k1 = grid.wavenumber(grid.freq_index(qx));
            for (int qy = 0; qy < grid.n; ++qy) {
                const double k2 = grid.wavenumber(grid.freq_index(qy));
                rows.push_back({static_cast<double>(j), std::hypot(k1, k2),
                                table[static_cast<std::size_t>(qx) * grid.n + qy]});
            }
        }
    }
    const std::string path = out.empty() ? out_path(g, "partition.csv") : out;
    write_csv(path, "j,|k|,multiplier", rows, g.force);
    std::printf("wrote %s (j = -1..%d, %zu rows)\n", path.c_str(), part.j_max(), rows.size());
    return 0;
}

int cmd_norm(const GlobalFlags& g, const std::string& which, const std::string& field_path,
             double s, double p, double r, const std::string& out) {
    const Field f = read_field(field_path);
    if (which == "lp") {
        std::printf("||f||_{L^%g} = %.17g\n", p, lp_norm(f, p));
        return 0;
    }
    if (which == "sobolev") {
        std::printf("||f||_{H^%g} = %.17g\n", s, sobolev_norm(f, s));
        return 0;
    }
    const DyadicPartition part = build_partition(f.grid());
    const NormReport rep = besov_norm(part, f, {s, p, r});
    const std::string path = out.empty() ? out_path(g, "norm_report.json") : out;
    write_report(to_json(rep), "norm_report", path, g.force);
    std::printf("||f||_{B^%g_{%g,%g}} = %.17g  (report: %s)\n", s, p, r, rep.total, path.c_str());
    return 0;
}

int cmd_lab_run(const GlobalFlags& g, const std::string& check, int trials, int n, double length,
                const std::vector<std::string>& params, const std::string& out) {
    const LabContext ctx = LabContext::make(n, length, g.seed);
    const EstimateReport rep = run_named_check(ctx, check, trials, parse_params(params));
    const std::string path = out.empty() ? out_path(g, "lab_" + check + ".json") : out;
    write_report(to_json(rep), "estimate_report", path, g.force);
    std::printf("%s: trials=%d skipped=%d worst_ratio=%.6g  (report: %s)\n", check.c_str(),
                rep.trials, rep.skipped, rep.worst_ratio, path.c_str());
    return 0;
}

int cmd_lab_calibrate(const GlobalFlags& g, int trials, int n, double length,
                      const std::string& out) {
    const LabContext ctx = LabContext::make(n, length, g.seed);
    const Calibration cal = calibrate(ctx, trials);
    const std::string path = out.empty() ? out_path(g, "calibration.json") : out;
    save_calibration(cal, path, g.force);
    std::printf("C0=%.6g C_bony=%.6g heat_C=%.6g (constants: %s)\n", cal.C0, cal.C_bony,
                cal.heat_C, path.c_str());
    return 0;
}

int cmd_solve(const GlobalFlags& g, const std::string& config_path, bool diffusion) {
    const SolveConfig cfg = parse_solve_config(load_json(config_path), diffusion);
    LinearProblem prob;
    prob.f0 = cfg.f0;
    prob.nu = cfg.nu;
    prob.T = cfg.T;
    prob.dt = cfg.dt;
    prob.snapshot_cadence = cfg.cadence;
    prob.velocity = cfg.velocity;
    prob.forcing = cfg.forcing;
    const Trajectory traj = diffusion ? solve_transport_diffusion(prob) : solve_transport(prob);

    json index;
    index["snapshots"] = json::array();
    std::vector<std::vector<double>> series;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%04zu.bswf", i);
        const std::string fpath = out_path(g, name);
        write_field(traj.snapshots[i].f, fpath, g.force);
        index["snapshots"].push_back({{"t", traj.snapshots[i].t}, {"path", name}});
        series.push_back({traj.snapshots[i].t, lp_norm(traj.snapshots[i].f, 2.0)});
    }
    index["scheme"] = traj.meta.scheme;
    index["dt"] = traj.meta.dt;
    index["nu"] = traj.meta.nu;
    write_report(index, "trajectory_index", out_path(g, "trajectory.json"), g.force);
    write_csv(out_path(g, "norm_series.csv"), "t,l2_norm", series, g.force);
    std::printf("solved to T=%g with dt=%g, %zu snapshots in %s\n", cfg.T, traj.meta.dt,
                traj.snapshots.size(), g.out_dir.c_str());
    return 0;
}

int cmd_swe_iterate(const GlobalFlags& g, const std::string& config_path) {
    const Calibration cal = required_constants(g);
    SWConfig cfg = parse_sw_config(load_json(config_path), &cal);
    const IterationReport rep = run_iteration(cfg);
    write_report(to_json(rep), "iteration_report", out_path(g, "iteration_report.json"), g.force);

    std::vector<std::vector<double>> rows;
    for (const auto& r : rep.rows)
        rows.push_back({static_cast<double>(r.n), r.u_linf_bs, r.u_l2_bs1, r.h_linf_bs,
                        r.chi_member ? 1.0 : 0.0, r.delta});
    write_csv(out_path(g, "iterates.csv"), "n,u_linf_bs,u_l2_bs1,h_linf_bs,chi_member,delta",
              rows, g.force);

    std::printf("T2=%g E1=%g E2=%g q=%.4g residual=%.3g gap_u=%.3g\n", rep.budget.T2,
                rep.budget.E1, rep.budget.E2, rep.contraction_q, rep.residual, rep.gap_u);
    bool all_chi = true;
    for (const auto& r : rep.rows) all_chi = all_chi && r.chi_member;
    if (rep.non_contraction) std::fprintf(stderr, "diagnostic: fitted q >= 1 (non-contraction)\n");
    if (!all_chi) std::fprintf(stderr, "diagnostic: some iterate left the budget set\n");
    return (rep.non_contraction || !all_chi) ? 2 : 0;
}

int cmd_swe_direct(const GlobalFlags& g, const std::string& config_path, double horizon) {
    SWConfig cfg = parse_sw_config(load_json(config_path), nullptr);
    const DirectResult res = direct_solve(cfg, horizon, cfg.dt, 8);
    write_report(to_json(res), "direct_report", out_path(g, "direct_report.json"), g.force);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.u.snapshots.size(); ++i)
        rows.push_back({res.u.snapshots[i].t, lp_norm(res.u.snapshots[i].f, 2.0),
                        lp_norm(res.h.snapshots[i].f, 2.0), res.mass_series[i].second});
    write_csv(out_path(g, "direct_series.csv"), "t,u_l2,h_l2,mass", rows, g.force);
    std::printf("direct run to T=%g: mass drift %.3g (relative)\n", horizon, res.mass_drift_rel);
    return 0;
}

int cmd_swe_global(const GlobalFlags& g, const std::string& config_path, double horizon,
                   double checkpoint_every) {
    SWConfig cfg = parse_sw_config(load_json(config_path), nullptr);
    const GlobalReport rep = global_run(cfg, horizon, checkpoint_every);
    write_report(to_json(rep), "global_report", out_path(g, "global_report.json"), g.force);
    std::vector<std::vector<double>> rows;
    for (const auto& cp : rep.checkpoints)
        rows.push_back({cp.t, cp.u_bs, cp.h_bs, cp.u_hs1, cp.u_l2t_hs1p1, cp.sup_sum});
    write_csv(out_path(g, "global_series.csv"), "t,u_bs,h_bs,u_hs1,u_l2t_hs1p1,sup_sum", rows,
              g.force);
    std::printf("global run: envelope C=%.4g ok=%d regime_exit=%d mass_drift=%.3g\n",
                rep.envelope_C, rep.envelope_ok ? 1 : 0, rep.regime_exit ? 1 : 0,
                rep.mass_drift_rel);
    if (rep.regime_exit) {
        std::fprintf(stderr, "regime exit at t=%g\n", rep.regime_exit_time);
        return 2;
    }
    return rep.envelope_ok ? 0 : 2;
}

int cmd_swe_probe(const GlobalFlags& g, const std::string& config_a, const std::string& config_b,
                  double horizon) {
    SWConfig a = parse_sw_config(load_json(config_a), nullptr);
    SWConfig b = parse_sw_config(load_json(config_b), nullptr);
    const DivergenceReport rep = uniqueness_probe(a, b, horizon);
    write_report(to_json(rep), "divergence_report", out_path(g, "divergence_report.json"),
                 g.force);
    std::printf("initial gap %.6g -> final gap %.6g (growth %.4g)\n", rep.initial_gap,
                rep.final_gap, rep.growth);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Littlewood-Paley / Besov toolkit for the 2D viscous shallow water system"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--out-dir", g.out_dir, "output directory");
    app.add_option("--constants", g.constants_path, "calibration constants file");
    app.add_flag("--force", g.force, "overwrite existing outputs");

    // lp
    auto* lp = app.add_subcommand("lp", "dyadic partition tools");
    auto* dump = lp->add_subcommand("dump-partition", "dump multiplier tables as CSV");
    int dump_n = 64;
    double dump_len = kTwoPi * 16;
    int dump_jmax = -1;
    std::string dump_out;
    dump->add_option("--n", dump_n, "grid size");
    dump->add_option("--length", dump_len, "box length");
    dump->add_option("--j-max", dump_jmax, "force a smaller top block");
    dump->add_option("--out", dump_out, "output CSV path");

    // norm
    auto* norm = app.add_subcommand("norm", "norm computations on stored fields");
    std::string norm_kind = "besov", norm_field, norm_out;
    double norm_s = 2.0, norm_p = 2.0, norm_r = 2.0;
    norm->add_option("kind", norm_kind, "besov | lp | sobolev");
    norm->add_option("--field", norm_field, "BSWF field file")->required();
    norm->add_option("--s", norm_s, "smoothness s");
    norm->add_option("--p", norm_p, "integrability p");
    norm->add_option("--r", norm_r, "summability r");
    norm->add_option("--out", norm_out, "report path");

    // lab
    auto* lab = app.add_subcommand("lab", "inequality verification lab");
    auto* lab_run = lab->add_subcommand("run", "run one check");
    std::string lab_check;
    int lab_trials = 100, lab_n = 64;
    double lab_len = kTwoPi;
    std::vector<std::string> lab_params;
    std::string lab_out;
    lab_run->add_option("--check", lab_check, "check name")->required();
    lab_run->add_option("--trials", lab_trials, "trial count");
    lab_run->add_option("--n", lab_n, "grid size");
    lab_run->add_option("--length", lab_len, "box length");
    lab_run->add_option("--param", lab_params, "key=value parameter overrides");
    lab_run->add_option("--out", lab_out, "report path");
    auto* lab_cal = lab->add_subcommand("calibrate", "produce the constants file");
    int cal_trials = 100, cal_n = 64;
    double cal_len = kTwoPi;
    std::string cal_out;
    lab_cal->add_option("--trials", cal_trials, "trial count");
    lab_cal->add_option("--n", cal_n, "grid size");
    lab_cal->add_option("--length", cal_len, "box length");
    lab_cal->add_option("--out", cal_out, "constants path");

    // solve
    auto* solve = app.add_subcommand("solve", "linear transport solvers");
    auto* tr = solve->add_subcommand("transport", "pure transport");
    auto* td = solve->add_subcommand("tdiff", "transport-diffusion");
    std::string tr_cfg, td_cfg;
    tr->add_option("--config", tr_cfg, "problem config JSON")->required();
    td->add_option("--config", td_cfg, "problem config JSON")->required();

    // swe
    auto* swe = app.add_subcommand("swe", "shallow water runs");
    auto* it = swe->add_subcommand("iterate", "successive-approximation run");
    std::string it_cfg;
    it->add_option("--config", it_cfg, "run config JSON")->required();
    auto* dr = swe->add_subcommand("direct", "direct nonlinear solve");
    std::string dr_cfg;
    double dr_T = 1.0;
    dr->add_option("--config", dr_cfg, "run config JSON")->required();
    dr->add_option("--horizon", dr_T, "time horizon");
    auto* gl = swe->add_subcommand("global", "small-data long-horizon run");
    std::string gl_cfg;
    double gl_T = 50.0, gl_every = 0.5;
    gl->add_option("--config", gl_cfg, "run config JSON")->required();
    gl->add_option("--horizon", gl_T, "time horizon");
    gl->add_option("--checkpoint-every", gl_every, "checkpoint spacing");
    auto* pr = swe->add_subcommand("probe", "two-run continuity-in-data probe");
    std::string pr_a, pr_b;
    double pr_T = 0.25;
    pr->add_option("--config-a", pr_a, "first run config")->required();
    pr->add_option("--config-b", pr_b, "second run config")->required();
    pr->add_option("--horizon", pr_T, "time horizon");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump->parsed()) return cmd_dump_partition(g, dump_n, dump_len, dump_jmax, dump_out);
        if (norm->parsed()) return cmd_norm(g, norm_kind, norm_field, norm_s, norm_p, norm_r, norm_out);
        if (lab_run->parsed()) return cmd_lab_run(g, lab_check, lab_trials, lab_n, lab_len, lab_params, lab_out);
        if (lab_cal->parsed()) return cmd_lab_calibrate(g, cal_trials, cal_n, cal_len, cal_out);
        if (tr->parsed()) return cmd_solve(g, tr_cfg, false);
        if (td->parsed()) return cmd_solve(g, td_cfg, true);
        if (it->parsed()) return cmd_swe_iterate(g, it_cfg);
        if (dr->parsed()) return cmd_swe_direct(g, dr_cfg, dr_T);
        if (gl->parsed()) return cmd_swe_global(g, gl_cfg, gl_T, gl_every);
        if (pr->parsed()) return cmd_swe_probe(g, pr_a, pr_b, pr_T);
        std::fprintf(stderr, "no subcommand action selected\n");
        return 1;
    } catch (const RegimeExitError& e) {
        std::fprintf(stderr, "regime exit: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
