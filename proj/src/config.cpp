#include "lpsw/config.hpp"

#include <set>

#include "lpsw/randfield.hpp"

namespace lpsw {
namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                std::vector<std::string>& errors, const std::string& context) {
    if (!j.is_object()) {
        errors.push_back(context + ": expected an object");
        return;
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.contains(key)) errors.push_back(context + ": unknown key '" + key + "'");
    }
}

double get_num(const json& j, const std::string& key, double fallback,
               std::vector<std::string>& errors, const std::string& context) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        errors.push_back(context + "." + key + ": expected a number");
        return fallback;
    }
    return j[key].get<double>();
}

}  // namespace

Grid parse_grid(const json& j, std::vector<std::string>& errors) {
    check_keys(j, {"n", "length"}, errors, "grid");
    const int n = static_cast<int>(get_num(j, "n", 0, errors, "grid"));
    const double length = get_num(j, "length", 0.0, errors, "grid");
    try {
        return make_grid(n, length);
    } catch (const ConfigError& e) {
        for (const auto& v : e.violations()) errors.push_back("grid: " + v);
        if (e.violations().empty()) errors.push_back(std::string("grid: ") + e.what());
        return Grid{16, 1.0};  // placeholder; errors already recorded
    }
}

Field parse_field_preset(const json& j, const Grid& grid, int components,
                         const DyadicPartition* coverage, std::uint64_t default_seed,
                         std::vector<std::string>& errors, const std::string& ctx) {
    Field zero(grid, components);
    if (!j.is_object() || !j.contains("preset")) {
        errors.push_back(ctx + ": expected an object with a 'preset' key");
        return zero;
    }
    const std::string preset = j["preset"].is_string() ? j["preset"].get<std::string>() : "";
    auto offset_of = [&](const json& obj) { return get_num(obj, "offset", 0.0, errors, ctx); };

    if (preset == "zero") {
        check_keys(j, {"preset"}, errors, ctx);
        return zero;
    }
    if (preset == "constant") {
        check_keys(j, {"preset", "value"}, errors, ctx);
        if (!j.contains("value")) {
            errors.push_back(ctx + ": constant preset needs 'value'");
            return zero;
        }
        Field f(grid, components);
        if (components == 1) {
            const double v = j["value"].is_number() ? j["value"].get<double>() : 0.0;
            for (auto& x : f.comp(0)) x = v;
        } else {
            if (!j["value"].is_array() || j["value"].size() != 2) {
                errors.push_back(ctx + ": vector constant needs value = [c1, c2]");
                return zero;
            }
            for (int c = 0; c < 2; ++c) {
                const double v = j["value"][c].get<double>();
                for (auto& x : f.comp(c)) x = v;
            }
        }
        return f;
    }
    if (preset == "single-mode") {
        check_keys(j, {"preset", "m", "amplitude", "phase", "divergence_free", "offset"}, errors,
                   ctx);
        if (!j.contains("m") || !j["m"].is_array() || j["m"].size() != 2) {
            errors.push_back(ctx + ": single-mode preset needs m = [m1, m2]");
            return zero;
        }
        const int m1 = j["m"][0].get<int>();
        const int m2 = j["m"][1].get<int>();
        const double amp = get_num(j, "amplitude", 1.0, errors, ctx);
        const double phase = get_num(j, "phase", 0.0, errors, ctx);
        const bool divfree = j.value("divergence_free", components == 2);
        if (std::abs(m1) > grid.dealias_cutoff() || std::abs(m2) > grid.dealias_cutoff())
            errors.push_back(ctx + ": mode outside the dealias band |m_i| <= n/3");
        Field f = components == 2 && divfree ? cosine_mode_divfree(grid, m1, m2, amp, phase)
                  : components == 2
                      ? [&] {
                            Field v(grid, 2);
                            const Field s = cosine_mode(grid, m1, m2, amp, phase);
                            std::copy(s.comp(0).begin(), s.comp(0).end(), v.comp(0).begin());
                            return v;
                        }()
                      : cosine_mode(grid, m1, m2, amp, phase);
        if (components == 1 && j.contains("offset")) {
            const double off = offset_of(j);
            for (auto& x : f.comp(0)) x += off;
        }
        return f;
    }
    if (preset == "random-beta") {
        check_keys(j, {"preset", "beta", "amplitude", "seed", "divergence_free", "offset"}, errors,
                   ctx);
        RandomFieldSpec spec;
        spec.beta = get_num(j, "beta", 3.0, errors, ctx);
        spec.amplitude = get_num(j, "amplitude", 1.0, errors, ctx);
        spec.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : default_seed;
        spec.components = components;
        spec.divergence_free = j.value("divergence_free", components == 2);
        Field f = random_field(grid, spec, coverage);
        if (components == 1 && j.contains("offset")) {
            const double off = offset_of(j);
            for (auto& x : f.comp(0)) x += off;
        }
        return f;
    }
    if (preset == "shear") {
        check_keys(j, {"preset", "amplitude"}, errors, ctx);
        if (components != 2) {
            errors.push_back(ctx + ": shear preset is a vector field");
            return zero;
        }
        return shear_flow(grid, get_num(j, "amplitude", 1.0, errors, ctx));
    }
    if (preset == "file") {
        check_keys(j, {"preset", "path"}, errors, ctx);
        if (!j.contains("path")) {
            errors.push_back(ctx + ": file preset needs 'path'");
            return zero;
        }
        Field f = read_field(j["path"].get<std::string>());
        if (!(f.grid() == grid)) errors.push_back(ctx + ": field file grid mismatch");
        if (f.components() != components) errors.push_back(ctx + ": field file component mismatch");
        return f;
    }
    errors.push_back(ctx + ": unknown preset '" + preset + "'");
    return zero;
}

SWConfig parse_sw_config(const json& j, const Calibration* constants) {
    std::vector<std::string> errors;
    check_keys(j,
               {"grid", "nu", "besov", "u0", "h0", "T", "dt", "n_iters", "seed", "eps", "eta",
                "printed_gradh_sign"},
               errors, "config");

    SWConfig cfg;
    if (j.contains("grid"))
        cfg.grid = parse_grid(j["grid"], errors);
    else
        errors.push_back("config: missing 'grid'");

    cfg.nu = get_num(j, "nu", 0.5, errors, "config");
    if (!(cfg.nu > 0.0 && cfg.nu < 1.0))
        errors.push_back("config.nu: viscosity must lie in the open interval (0, 1), got " +
                         std::to_string(cfg.nu));

    if (j.contains("besov")) {
        check_keys(j["besov"], {"s", "p", "r"}, errors, "besov");
        cfg.params.s = get_num(j["besov"], "s", 2.0, errors, "besov");
        cfg.params.p = get_num(j["besov"], "p", 2.0, errors, "besov");
        cfg.params.r = get_num(j["besov"], "r", 2.0, errors, "besov");
    }
    if (!(cfg.params.s > std::max(1.0, 2.0 / cfg.params.p)))
        errors.push_back("besov: need s > max(1, 2/p)");

    cfg.T = get_num(j, "T", 0.0, errors, "config");
    cfg.dt = get_num(j, "dt", 0.0, errors, "config");
    cfg.n_iters = static_cast<int>(get_num(j, "n_iters", 8, errors, "config"));
    cfg.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : 1;
    cfg.eps = get_num(j, "eps", 0.05, errors, "config");
    cfg.eta = get_num(j, "eta", 0.01, errors, "config");
    cfg.printed_gradh_sign = j.value("printed_gradh_sign", false);

    std::optional<DyadicPartition> part;
    try {
        part = build_partition(cfg.grid);
    } catch (const ConfigError& e) {
        errors.push_back(e.what());
    }
    const DyadicPartition* cov = part ? &*part : nullptr;
    if (j.contains("u0"))
        cfg.u0 = parse_field_preset(j["u0"], cfg.grid, 2, cov, cfg.seed, errors, "u0");
    else
        errors.push_back("config: missing 'u0'");
    if (j.contains("h0"))
        cfg.h0 = parse_field_preset(j["h0"], cfg.grid, 1, cov, cfg.seed + 1, errors, "h0");
    else
        errors.push_back("config: missing 'h0'");

    if (constants != nullptr) cfg.constants = *constants;
    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

SolveConfig parse_solve_config(const json& j, bool diffusion) {
    std::vector<std::string> errors;
    check_keys(j, {"grid", "nu", "T", "dt", "cadence", "f0", "velocity", "forcing", "components"},
               errors, "config");
    SolveConfig cfg;
    if (j.contains("grid"))
        cfg.grid = parse_grid(j["grid"], errors);
    else
        errors.push_back("config: missing 'grid'");
    cfg.nu = get_num(j, "nu", diffusion ? 0.1 : 0.0, errors, "config");
    if (diffusion && !(cfg.nu > 0.0)) errors.push_back("config.nu: diffusion solve needs nu > 0");
    if (!diffusion && cfg.nu != 0.0) errors.push_back("config.nu: transport solve needs nu = 0");
    cfg.T = get_num(j, "T", 1.0, errors, "config");
    if (!(cfg.T > 0.0)) errors.push_back("config.T: horizon must be positive");
    cfg.dt = get_num(j, "dt", 0.0, errors, "config");
    cfg.cadence = static_cast<int>(get_num(j, "cadence", 1, errors, "config"));
    if (cfg.cadence < 1) errors.push_back("config.cadence: must be >= 1");

    const int comps = static_cast<int>(get_num(j, "components", 1, errors, "config"));
    std::optional<DyadicPartition> part;
    try {
        part = build_partition(cfg.grid);
    } catch (const ConfigError&) {
        part.reset();  // solves do not need the partition; presets fall back
    }
    const DyadicPartition* cov = part ? &*part : nullptr;
    if (j.contains("f0"))
        cfg.f0 = parse_field_preset(j["f0"], cfg.grid, comps, cov, 1, errors, "f0");
    else
        errors.push_back("config: missing 'f0'");
    if (j.contains("velocity"))
        cfg.velocity = parse_field_preset(j["velocity"], cfg.grid, 2, cov, 2, errors, "velocity");
    if (j.contains("forcing"))
        cfg.forcing = parse_field_preset(j["forcing"], cfg.grid, comps, cov, 3, errors, "forcing");
    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

}  // namespace lpsw
