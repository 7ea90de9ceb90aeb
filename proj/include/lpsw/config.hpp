#pragma once

#include "lpsw/io.hpp"

namespace lpsw {

// Config-file parsing for the CLI. Parsing is strict: unknown keys are
// collected as violations (no silent typo tolerance) and every violation
// is reported at once.

Grid parse_grid(const json& j, std::vector<std::string>& errors);

// Initial-data / coefficient presets:
//   {"preset":"zero"}
//   {"preset":"constant","value":c | [c1,c2]}
//   {"preset":"single-mode","m":[m1,m2],"amplitude":a,"phase":p,
//    "divergence_free":b,"offset":c}
//   {"preset":"random-beta","beta":b,"amplitude":a,"seed":s,
//    "divergence_free":b,"offset":c}
//   {"preset":"shear","amplitude":a}           (vector only)
//   {"preset":"file","path":"field.bswf"}
Field parse_field_preset(const json& j, const Grid& grid, int components,
                         const DyadicPartition* coverage, std::uint64_t default_seed,
                         std::vector<std::string>& errors, const std::string& context);

SWConfig parse_sw_config(const json& j, const Calibration* constants);

struct SolveConfig {
    Grid grid;
    double nu = 0.0;
    double T = 1.0;
    double dt = 0.0;
    int cadence = 1;
    Field f0;
    std::optional<Field> velocity;
    std::optional<Field> forcing;
};

SolveConfig parse_solve_config(const json& j, bool diffusion);

}  // namespace lpsw
