#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpsw/linsolve.hpp"
#include "lpsw/randfield.hpp"

namespace lpsw {

// One empirically probed inequality: the worst LHS/RHS ratio over an
// ensemble of random fields is the calibrated stand-in for the unnamed
// constant in front of the estimate.
struct EstimateReport {
    std::string name;
    int trials = 0;
    int skipped = 0;      // zero-denominator trials, counted but excluded
    int regenerated = 0;  // trials rescaled back into the admissible regime
    double worst_ratio = 0.0;
    std::map<std::string, double> params;
    struct Sample {
        int trial;
        double lhs;
        double rhs;
        double ratio;
    };
    std::vector<Sample> samples;
};

struct LabContext {
    Grid grid;
    DyadicPartition partition;
    double beta = 3.0;  // spectral decay of trial fields
    std::uint64_t seed = 1;

    static LabContext make(int n, double length, std::uint64_t seed, double beta = 3.0);
};

// Lemma-by-lemma checks. Parameters outside each estimate's validity
// region raise PreconditionError (no constant is calibrated there).
EstimateReport check_embedding(const LabContext& ctx, int trials, double s, double p1, double r1,
                               double p2, double r2);
EstimateReport check_gradient(const LabContext& ctx, int trials, double s, double p, double r);
EstimateReport check_interpolation(const LabContext& ctx, int trials, double s1, double s2,
                                   double theta, double p, double r);
EstimateReport check_linfty_embedding(const LabContext& ctx, int trials, double s, double p,
                                      double r);
EstimateReport check_composition(const LabContext& ctx, int trials, double s, double p, double r);
EstimateReport check_paraproduct(const LabContext& ctx, int trials, double s, double t, double p,
                                 double r1, double r2);
EstimateReport check_remainder(const LabContext& ctx, int trials, double s1, double s2, double p1,
                               double p2, double r1, double r2);
EstimateReport check_algebra(const LabContext& ctx, int trials, double s, double p, double r);
EstimateReport check_heat_smoothing(const LabContext& ctx, int trials, double nu, int j_block,
                                    double a, double b, double p, double q, double T);

// Named dispatch used by the CLI: check in {embedding, gradient,
// interpolation, linfty, composition, paraproduct, remainder, algebra,
// heat}; params override the defaults.
EstimateReport run_named_check(const LabContext& ctx, const std::string& check, int trials,
                               const std::map<std::string, double>& params = {});
std::vector<std::string> lab_check_names();

// Constants consumed by the iteration budgets, with provenance.
struct Calibration {
    double C0 = 0.0;      // transport / transport-diffusion estimate constant
    double C_bony = 0.0;  // product-machinery constant for the window conditions
    double heat_C = 0.0;
    std::map<std::string, double> Csp;  // "s=<s>,p=<p>" -> L-infinity embedding constant

    std::uint64_t seed = 0;
    int trials = 0;
    int grid_n = 0;
    double grid_length = 0.0;

    double csp(double s, double p) const;
    static std::string csp_key(double s, double p);
};

Calibration calibrate(const LabContext& ctx, int trials);

}  // namespace lpsw
