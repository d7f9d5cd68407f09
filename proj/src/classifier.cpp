#include "potwell/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace potwell {

namespace {

bool record_in_w(const TrajectoryRecord& r) { return r.klass == WellClass::InW; }
bool record_in_v(const TrajectoryRecord& r) { return r.klass == WellClass::InV; }

// Least-squares slope of linf over time.
double linf_trend_slope(const std::vector<TrajectoryRecord>& rs) {
    const std::size_t n = rs.size();
    if (n < 2) return 0.0;
    double mt = 0.0, my = 0.0;
    for (const auto& r : rs) {
        mt += r.t;
        my += r.linf;
    }
    mt /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (const auto& r : rs) {
        num += (r.t - mt) * (r.linf - my);
        den += (r.t - mt) * (r.t - mt);
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace

TrajectoryVerdict classify_trajectory(const Field& u0, const SolverConfig& cfg,
                                      const RieszKernel& kernel, const Exponents& exps,
                                      const Constants& consts) {
    TrajectoryVerdict v;
    v.outcome = integrate(u0, cfg, kernel, exps, consts);

    const bool u0_is_zero =
        norm(u0, std::numeric_limits<double>::infinity()) < zero_threshold(u0.domain);

    v.kind = TrajectoryVerdict::Kind::Undetermined;
    for (const TrajectoryRecord& r : v.outcome.records) {
        if (record_in_w(r) || (u0_is_zero && r.klass == WellClass::Zero)) {
            v.kind = TrajectoryVerdict::Kind::EntersW;
            v.t0 = r.t;
            break;
        }
        if (record_in_v(r)) {
            v.kind = TrajectoryVerdict::Kind::EntersV;
            v.t0 = r.t;
            break;
        }
    }

    if (v.kind == TrajectoryVerdict::Kind::EntersV) {
        const bool dt_collapsed =
            !v.outcome.records.empty() &&
            v.outcome.records.back().dt <= cfg.dt_min * (1.0 + 1e-9);
        v.consistent = (v.outcome.verdict == Verdict::BlowUp) ||
                       (v.outcome.verdict != Verdict::BlowUp && dt_collapsed);
    }

    if (v.outcome.verdict != Verdict::BlowUp) {
        std::vector<double> js;
        js.reserve(v.outcome.records.size());
        for (const auto& r : v.outcome.records) js.push_back(r.j);
        const C0Estimate est = c0_estimate(js, exps);
        if (est.settled) {
            v.c_limit = js.back();
            v.c0 = est.value;
        }
    }
    return v;
}

LambdaScanResult lambda_scan(const Field& phi, double lambda_min, double lambda_max,
                             double bracket_tol, const SolverConfig& cfg,
                             const RieszKernel& kernel, const Exponents& exps,
                             const Constants& consts, int max_probes) {
    if (!(lambda_min > 0.0 && lambda_min < lambda_max))
        throw std::invalid_argument("lambda_scan: need 0 < lambda_min < lambda_max");
    if (!(bracket_tol > 0.0))
        throw std::invalid_argument("lambda_scan: bracket_tol must be positive");
    double phi_min = std::numeric_limits<double>::infinity(), phi_max = 0.0;
    for (double x : phi.values) {
        phi_min = std::min(phi_min, x);
        phi_max = std::max(phi_max, std::abs(x));
    }
    if (phi_min < 0.0) throw std::invalid_argument("lambda_scan: phi must be nonnegative");
    if (!(phi_max > 0.0)) throw std::invalid_argument("lambda_scan: phi must be nontrivial");

    LambdaScanResult res;
    int budget = max_probes;

    auto probe = [&](double lam) -> const TrajectoryVerdict& {
        for (const LambdaProbe& p : res.probes)
            if (p.lambda == lam) return p.verdict;
        --budget;
        res.probes.push_back({lam, classify_trajectory(scaled(phi, lam), cfg, kernel,
                                                       exps, consts)});
        return res.probes.back().verdict;
    };
    using Kind = TrajectoryVerdict::Kind;

    if (probe(lambda_min).kind != Kind::EntersW)
        throw BracketInvalid("lambda_scan: lower endpoint does not enter the stable set");
    if (probe(lambda_max).kind != Kind::EntersV)
        throw BracketInvalid("lambda_scan: upper endpoint does not enter the unstable set");

    // Bisection for the stable threshold: lo always EntersW, hi never.
    double lo = lambda_min, hi = lambda_max;
    while (hi / lo - 1.0 > bracket_tol && budget > 0) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid).kind == Kind::EntersW)
            lo = mid;
        else
            hi = mid;
    }
    res.lambda1_lo = lo;
    res.lambda1_hi = hi;

    // Bisection for the unstable threshold: hi always EntersV. Seed the
    // bracket with everything already probed.
    lo = lambda_min;
    hi = lambda_max;
    for (const LambdaProbe& p : res.probes) {
        if (p.verdict.kind == Kind::EntersV)
            hi = std::min(hi, p.lambda);
        else
            lo = std::max(lo, p.lambda);
    }
    while (hi / lo - 1.0 > bracket_tol && budget > 0) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid).kind == Kind::EntersV)
            hi = mid;
        else
            lo = std::max(lo, mid);
    }
    res.lambda2_lo = lo;
    res.lambda2_hi = hi;
    res.budget_exhausted = budget <= 0;

    std::sort(res.probes.begin(), res.probes.end(),
              [](const LambdaProbe& a, const LambdaProbe& b) { return a.lambda < b.lambda; });

    // Verdicts must read W* U* V* in lambda order; anything else is reported,
    // not silently repaired.
    int phase = 0;  // 0 = stable prefix, 1 = undetermined gap, 2 = unstable tail
    for (const LambdaProbe& p : res.probes) {
        int k = p.verdict.kind == Kind::EntersW ? 0
                : p.verdict.kind == Kind::Undetermined ? 1
                                                       : 2;
        if (k < phase) {
            res.ordering_ok = false;
            break;
        }
        phase = k;
    }
    return res;
}

BlowupProbeReport infinite_blowup_probe(const TrajectoryVerdict& verdict,
                                        const Constants& consts, const Exponents& exps) {
    BlowupProbeReport rep;
    if (verdict.kind != TrajectoryVerdict::Kind::Undetermined) {
        rep.valid = false;
        return rep;
    }
    rep.valid = true;

    const auto& rs = verdict.outcome.records;
    if (rs.empty()) return rep;

    const double tol = 1e-6 * std::max(1.0, consts.m_mu);
    rep.j_floor_ok = std::all_of(rs.begin(), rs.end(), [&](const TrajectoryRecord& r) {
        return r.j >= consts.m_mu - tol;
    });

    rep.linf_growth_ok = rs.back().linf > rs.front().linf && linf_trend_slope(rs) > 0.0;

    std::vector<double> js;
    js.reserve(rs.size());
    for (const auto& r : rs) js.push_back(r.j);
    const C0Estimate est = c0_estimate(js, exps);
    rep.c0 = est.value;
    rep.c0_positive = est.value > 0.0;
    return rep;
}

}  // namespace potwell
