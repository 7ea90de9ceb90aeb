#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "lpsw/norms.hpp"

namespace lpsw {

inline constexpr double kCflSafety = 0.5;

// Non-stiff part of the right-hand side, evaluated on spectral state.
// (step, stage) identify the RK4 stage so frozen-coefficient samplers can
// return stage-exact values; stage in {0,1,2,3} at times t, t+dt/2,
// t+dt/2, t+dt.
using DerivFn = std::function<SpectralField(double t, int step, int stage,
                                            const SpectralField& y)>;

struct StageRecord {
    // stage states of the unknown, [step][stage], spectral
    std::vector<std::array<SpectralField, 4>> states;
    double dt = 0.0;
};

struct IntegratorOptions {
    double T = 0.0;
    double dt = 0.0;
    double nu = 0.0;
    int snapshot_cadence = 1;  // store every k-th step; first/last always kept
    bool record_stages = false;
};

struct IntegrationResult {
    Trajectory traj;
    StageRecord stages;
    int steps = 0;
    double dt = 0.0;
};

// RK4 with the diffusion semigroup applied exactly per mode via an
// integrating factor (classic RK4 when nu = 0). dt is adjusted downward
// so the horizon is an exact multiple of the step.
IntegrationResult integrate_ifrk4(const SpectralField& y0, const DerivFn& rhs,
                                  const IntegratorOptions& opts);

// -P(v . grad y), evaluated componentwise with dealiased products.
SpectralField advection_term(const Field& velocity, const SpectralField& y);

// Time sampler for coefficient fields: piecewise-linear interpolation
// between trajectory snapshots.
class LinearInterpSampler {
  public:
    explicit LinearInterpSampler(const Trajectory& traj);
    Field at(double t) const;

  private:
    const Trajectory* traj_;
};

// Linear transport / transport-diffusion problem
//   d_t f + v . grad f - nu Lap f = g,   f(0) = f0.
// Velocity and forcing are static fields or stored trajectories (linearly
// interpolated in time); either may be omitted (zero).
struct LinearProblem {
    Field f0;
    double nu = 0.0;
    double T = 1.0;
    double dt = 0.0;  // 0 -> auto
    int snapshot_cadence = 1;
    std::optional<Field> velocity;
    const Trajectory* velocity_traj = nullptr;
    std::optional<Field> forcing;
    const Trajectory* forcing_traj = nullptr;
};

Trajectory solve_transport(const LinearProblem& prob);            // nu must be 0
Trajectory solve_transport_diffusion(const LinearProblem& prob);  // nu must be > 0

// Largest admissible step for the advective CFL restriction.
double cfl_dt_limit(const LinearProblem& prob);

Trajectory static_trajectory(const Field& f, double T);

// Evaluation of the a-priori transport estimate: the Besov norm of the
// solution against initial data, forcing and the exponential of the
// velocity-gradient accumulator V_{p1}(t) with calibrated constant C0.
struct TransportEstimateReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double f0_norm = 0.0;
    double forcing_term = 0.0;
    double V_total = 0.0;
    double C0 = 0.0;
    bool satisfied = false;
    double slack = 0.0;
    std::string v_branch;
    std::vector<std::pair<double, double>> V_series;
};

// Which norm of grad v feeds V' for given (s, p1, r); throws
// PreconditionError outside the admissible region.
std::string select_v_branch(double s, double p1, double r);

// V_{p1} accumulated by trapezoid over the velocity snapshots.
std::vector<std::pair<double, double>> accumulate_v(const DyadicPartition& p,
                                                    const Trajectory& velocity, double s,
                                                    double p1, double r);

TransportEstimateReport check_transport_estimate(const DyadicPartition& part,
                                                 const Trajectory& f, const Trajectory& velocity,
                                                 const Trajectory* forcing, const Field& f0,
                                                 double s, double p, double p1, double r,
                                                 double C0);

TransportEstimateReport check_smoothing_estimate(const DyadicPartition& part,
                                                 const Trajectory& f, const Trajectory& velocity,
                                                 const Trajectory* forcing, const Field& f0,
                                                 double s, double p, double p1, double r,
                                                 double rho, double rho1, double nu, double C0);

// Smallest C0 in [0, hi] making the given check pass (bisection; the
// bound is monotone in C0). Returns hi when even hi fails.
double minimal_c0(const std::function<bool(double)>& satisfied_at, double hi = 64.0);

}  // namespace lpsw
