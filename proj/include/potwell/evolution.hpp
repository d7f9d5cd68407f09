#pragma once

#include <optional>
#include <vector>

#include "potwell/functionals.hpp"
#include "potwell/grid.hpp"
#include "potwell/riesz.hpp"
#include "potwell/spectral.hpp"

namespace potwell {

struct SolverConfig {
    double dt_init = 1e-5;
    double dt_min = 1e-10;
    double dt_max = 1e-2;
    double safety = 0.8;        // in (0,1)
    double t_end = 1.0;
    double blowup_factor = 1e6;
    int record_every = 10;      // accepted steps between diagnostic records
    bool nonlinearity_on = true;
    double tol_step = 1e-6;     // local error target (L2 of corrector-predictor gap)

    void validate() const;  // throws std::invalid_argument
};

struct TrajectoryRecord {
    double t = 0.0;
    double a = 0.0;
    double b = 0.0;
    double j = 0.0;
    double i = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double dt = 0.0;
    double dissipation = 0.0;  // running quadrature of int ||u_t||_2^2
    WellClass klass = WellClass::Zero;
};

enum class Verdict { HorizonReached, BlowUp, EnteredW, EnteredV };

struct RunOutcome {
    Verdict verdict = Verdict::HorizonReached;
    /// BlowUp: estimated blow-up time; EnteredW/V: first record time inside
    /// the set; HorizonReached: t_end.
    double t_event = 0.0;
    std::vector<TrajectoryRecord> records;
    Field final_state;           // blow-up snapshot when verdict == BlowUp
    bool blowup_snapshot = false;
};

/// Coefficient-wise multiplication by exp(-lambda_k t): the exact discrete
/// heat flow. Requires t >= 0.
SpectralField semigroup_apply(const SpectralField& uh, double t);

/// f(u) = Phi |u|^{p-2} u with Phi = riesz_apply(|u|^p). Odd in u. With the
/// nonlinearity this is the full right-hand side of the evolution.
Field nonlinear_term(const Field& u, const RieszKernel& kernel, const Exponents& exps);

struct StepResult {
    Field u;
    double error_estimate = 0.0;  // L2 distance between corrector and predictor
    bool overflow = false;        // non-finite nonlinearity: caller treats as blow-up
};

/// One exponential predictor-corrector step:
///   predictor  u~ = e^{dt L}(u + dt f(u))
///   corrector  u+ = e^{dt L} u + dt/2 (e^{dt L} f(u) + f(u~))
/// The linear part is propagated exactly in the sine basis.
StepResult step(const Field& u, double dt, const SolverConfig& cfg,
                const RieszKernel& kernel, const Exponents& exps);

RunOutcome integrate(const Field& u0, const SolverConfig& cfg, const RieszKernel& kernel,
                     const Exponents& exps, const Constants& consts);

struct PicardResult {
    Field u;                          // state at t = T
    int iterations = 0;
    bool converged = false;           // false signals T too large for contraction
    std::vector<double> contraction;  // successive-difference ratios
};

/// Fixed-point iteration on the integral form of the flow,
///   u(t_i) = e^{t_i L} u0 + sum_j w_j e^{(t_i - t_j) L} f(u(t_j)),
/// with trapezoidal weights on n_time+1 equispaced nodes in [0, T].
/// With nonlinearity_on = false the free flow is returned after one sweep.
PicardResult picard_mild_solve(const Field& u0, double T, int n_time, double tol,
                               int max_iter, const RieszKernel& kernel,
                               const Exponents& exps, bool nonlinearity_on = true);

/// max_t |dissipation(t) + j(t) - j(0)| / max(1, |j(0)|) over the records.
double energy_identity_residual(const RunOutcome& outcome);

/// max over interior records of |d/dt(||u||_2^2 / 2) + i(t)| / max(1, |i(t)|),
/// the time derivative taken by (non-uniform) centered differences.
double nehari_derivative_check(const RunOutcome& outcome);

/// v(y) = lambda^{-1/2} u(x0 + y/lambda) on the box of side lambda*L, by
/// trilinear interpolation with zero extension outside the source box.
/// Leaves the energy j invariant and scales ||v||_2 = lambda ||u||_2.
Field scale_field(const Field& u, double lambda, const std::array<double, 3>& x0);

}  // namespace potwell
