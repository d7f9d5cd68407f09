#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "potwell/evolution.hpp"

namespace potwell {

struct TrajectoryVerdict {
    enum class Kind { EntersW, EntersV, Undetermined };
    Kind kind = Kind::Undetermined;
    double t0 = 0.0;  // first record time inside the set (EntersW/EntersV)
    RunOutcome outcome;
    std::optional<double> c_limit;  // settled limit of j along the run
    std::optional<double> c0;       // (2p/(p-1)) * c_limit
    /// EntersV must come with a blow-up (or a horizon hit with dt collapsed);
    /// anything else is flagged here instead of silently accepted.
    bool consistent = true;
};

TrajectoryVerdict classify_trajectory(const Field& u0, const SolverConfig& cfg,
                                      const RieszKernel& kernel, const Exponents& exps,
                                      const Constants& consts);

struct LambdaProbe {
    double lambda = 0.0;
    TrajectoryVerdict verdict;
};

struct LambdaScanResult {
    double lambda1_lo = 0.0, lambda1_hi = 0.0;  // bracket of the stable threshold
    double lambda2_lo = 0.0, lambda2_hi = 0.0;  // bracket of the unstable threshold
    std::vector<LambdaProbe> probes;            // sorted by lambda
    bool ordering_ok = true;    // probe verdicts are W* U* V* when sorted
    bool budget_exhausted = false;
};

struct BracketInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two bisections on u0 = lambda*phi: the largest lambda entering the stable
/// set and the smallest entering the unstable set. Requires phi >= 0, phi
/// not identically 0, EntersW at lambda_min and EntersV at lambda_max
/// (BracketInvalid otherwise). Stops each bracket at relative width
/// bracket_tol; max_probes exhaustion returns partial brackets.
LambdaScanResult lambda_scan(const Field& phi, double lambda_min, double lambda_max,
                             double bracket_tol, const SolverConfig& cfg,
                             const RieszKernel& kernel, const Exponents& exps,
                             const Constants& consts, int max_probes = 80);

struct BlowupProbeReport {
    bool valid = false;  // false: fed a non-Undetermined verdict
    bool j_floor_ok = false;       // j stayed >= m_mu - tol at every record
    bool linf_growth_ok = false;   // sup norm grew with positive trend slope
    bool c0_positive = false;
    double c0 = 0.0;
};

/// Necessary-condition checks for unbounded global growth on a trajectory
/// the classifier left Undetermined. Reports booleans only; finite horizons
/// cannot certify the regime.
BlowupProbeReport infinite_blowup_probe(const TrajectoryVerdict& verdict,
                                        const Constants& consts, const Exponents& exps);

}  // namespace potwell
