#include "potwell/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "potwell/classifier.hpp"
#include "potwell/evolution.hpp"
#include "potwell/functionals.hpp"
#include "potwell/ground_state.hpp"
#include "potwell/io.hpp"
#include "potwell/riesz.hpp"
#include "potwell/spectral.hpp"

namespace potwell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smooth random field: gaussian coefficients on modes up to kmax, weighted
// by 1/|k|^2.
Field random_smooth(const BoxDomain& d, std::mt19937_64& rng, int kmax) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField uh(d);
    for (int kz = 1; kz <= std::min(kmax, d.M); ++kz)
        for (int ky = 1; ky <= std::min(kmax, d.M); ++ky)
            for (int kx = 1; kx <= std::min(kmax, d.M); ++kx) {
                const double k2 = static_cast<double>(kx) * kx +
                                  static_cast<double>(ky) * ky +
                                  static_cast<double>(kz) * kz;
                uh.coeffs[d.index(kx - 1, ky - 1, kz - 1)] = gauss(rng) / k2;
            }
    return dst_inverse(uh);
}

struct Suite {
    std::ostream& out;
    int failures = 0;
    int checks = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        ++checks;
        if (ok) {
            out << "ok   " << name << "\n";
        } else {
            ++failures;
            out << "FAIL " << name;
            if (!detail.empty()) out << " (" << detail << ")";
            out << "\n";
        }
    }

    void check_le(const std::string& name, double value, double bound) {
        std::ostringstream ss;
        ss << "value " << format_double(value) << " bound " << format_double(bound);
        check(name, value <= bound, ss.str());
    }
};

}  // namespace

int run_verify(const VerifyOptions& opts, std::ostream& out) {
    Suite s{out};
    std::mt19937_64 rng(opts.seed);

    const int M = opts.quick ? 8 : 16;
    const BoxDomain dom(1.0, M);
    const Exponents exps(opts.mu);
    const Constants consts = constants_build(opts.mu);
    auto kernel = shared_kernel(dom, opts.mu);

    // --- transforms -------------------------------------------------------
    {
        Field u = random_smooth(dom, rng, 5);
        Field back = dst_inverse(dst_forward(u));
        double worst = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i)
            worst = std::max(worst, std::abs(back.values[i] - u.values[i]));
        s.check_le("transform round trip", worst, 1e-12 * norm(u, kInf));

        const double n2 = norm(u, 2.0);
        const double par = l2_norm_sq(dst_forward(u));
        s.check_le("parseval identity", std::abs(n2 * n2 - par), 1e-12 * n2 * n2);

        const double a1 = grad_norm_sq(u);
        const double a3 = grad_norm_sq(scaled(u, 3.0));
        s.check_le("grad norm homogeneity", std::abs(a3 - 9.0 * a1), 1e-12 * a3);

        Field ones = sample(dom, [](double, double, double) { return 1.0; });
        bool mono = true;
        for (double p : {1.0, 4.0, kInf}) {
            const double lhs = norm(ones, 2.0);
            const double rhs = std::pow(dom.L, 3.0 * (0.5 - (std::isinf(p) ? 0.0 : 1.0 / p))) *
                               norm(ones, p);
            // embedding direction flips across p = 2 on a volume < L^3
            mono = mono && (p >= 2.0 ? lhs <= rhs * (1.0 + 1e-12)
                                     : lhs >= rhs * (1.0 - 1e-12));
        }
        s.check("quadrature norm scaling across exponents", mono);
    }

    // --- convolution ------------------------------------------------------
    {
        Field f = random_smooth(dom, rng, 4);
        Field g = random_smooth(dom, rng, 4);
        const double dfg = inner(f, riesz_apply(*kernel, g));
        const double dgf = inner(g, riesz_apply(*kernel, f));
        s.check_le("riesz bilinear symmetry", std::abs(dfg - dgf), 1e-10 * std::abs(dfg));

        Field pos(dom);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (double& v : pos.values) v = unif(rng);
        s.check("riesz positivity", inner(pos, riesz_apply(*kernel, pos)) > 0.0);

        // corner-supported source vs direct sum at the far corner
        Field corner(dom);
        for (int iz = 0; iz < M / 2; ++iz)
            for (int iy = 0; iy < M / 2; ++iy)
                for (int ix = 0; ix < M / 2; ++ix)
                    corner(ix, iy, iz) = unif(rng);
        const Field phi = riesz_apply(*kernel, corner);
        const int e = M - 1;
        double direct = 0.0;
        const double h = dom.h;
        for (int iz = 0; iz < M; ++iz)
            for (int iy = 0; iy < M; ++iy)
                for (int ix = 0; ix < M; ++ix) {
                    const double v = corner(ix, iy, iz);
                    if (v == 0.0) continue;
                    const double dx = (e - ix) * h, dy = (e - iy) * h, dz = (e - iz) * h;
                    const double r2 = dx * dx + dy * dy + dz * dz;
                    const double kr = r2 == 0.0 ? kernel->self_cell_weight
                                                : std::pow(r2, -0.5 * opts.mu);
                    direct += kr * v;
                }
        direct *= h * h * h;
        s.check_le("padded convolution has no wrap-around",
                   std::abs(phi(e, e, e) - direct), 1e-10 * std::abs(direct));
    }

    // --- functionals ------------------------------------------------------
    {
        const double rel1 = std::abs(consts.s_hl -
                                     consts.s_sob / std::pow(consts.c_hls, 1.0 / (6.0 - opts.mu)));
        s.check_le("constants: quotient identity", rel1, 1e-12 * consts.s_hl);
        const double m_expect = (5.0 - opts.mu) / (2.0 * (6.0 - opts.mu)) *
                                std::pow(consts.s_hl, (6.0 - opts.mu) / (5.0 - opts.mu));
        s.check_le("constants: well depth identity", std::abs(consts.m_mu - m_expect),
                   1e-12 * consts.m_mu);

        Field u = bubble(dom, {0.5, 0.5, 0.5}, 0.2);
        const double q0 = quotient(u, *kernel, exps);
        bool scale_ok = true;
        for (double c : {0.1, 2.0, 10.0})
            scale_ok = scale_ok &&
                       std::abs(quotient(scaled(u, c), *kernel, exps) - q0) <= 1e-10 * q0;
        s.check("quotient scale invariance", scale_ok);

        // one-dimensional energy maximum on the ray through u
        const EnergyReport er = energy_report(u, *kernel, exps, consts);
        const double theta_bar = nehari_scale(er.a, er.b, exps);
        const double j_peak = energy_report(scaled(u, theta_bar), *kernel, exps, consts).j;
        bool peak_ok = true;
        for (int i = 0; i < 100; ++i) {
            const double theta = theta_bar * std::pow(10.0, -2.0 + 4.0 * i / 99.0);
            const double j = energy_report(scaled(u, theta), *kernel, exps, consts).j;
            peak_ok = peak_ok && j <= j_peak * (1.0 + 1e-10) + 1e-12;
        }
        s.check("ray energy peaks at the Nehari scale", peak_ok);
        const double i_at_peak = energy_report(scaled(u, theta_bar), *kernel, exps, consts).i;
        s.check_le("Nehari value vanishes at the ray scale", std::abs(i_at_peak),
                   1e-10 * er.a);

        bool excl_ok = true, hls_ok = true, remark_ok = true;
        const double b_threshold = std::pow(consts.s_hl, (6.0 - opts.mu) / (5.0 - opts.mu));
        for (int trial = 0; trial < (opts.quick ? 20 : 100); ++trial) {
            Field w = random_smooth(dom, rng, 4);
            const EnergyReport r = energy_report(w, *kernel, exps, consts);
            excl_ok = excl_ok && !(in_stable_set(r) && in_unstable_set(r));
            hls_ok = hls_ok && hls_check(w, *kernel, exps, consts).ok;
            // classification agrees with the B-threshold characterization
            if (r.j < consts.m_mu &&
                std::abs(r.b - b_threshold) > 1e-6 * b_threshold) {
                const bool by_b = r.b < b_threshold;
                const bool by_sign = r.klass == WellClass::InW || r.klass == WellClass::Zero;
                remark_ok = remark_ok && (by_b == by_sign);
            }
        }
        s.check("stable/unstable sets are mutually exclusive", excl_ok);
        s.check("pair-interaction bound holds on random fields", hls_ok);
        s.check("B-threshold characterization matches sign classification", remark_ok);
    }

    // --- evolution --------------------------------------------------------
    {
        // wide box: low stiffness keeps the difference-quotient and
        // centered-difference quadrature errors below 1e-6
        const BoxDomain wide(3.0, 8);
        auto wk = shared_kernel(wide, opts.mu);
        SolverConfig lin;
        lin.nonlinearity_on = false;
        lin.t_end = 0.3;
        lin.dt_init = 1e-5;
        lin.dt_max = 1e-4;
        lin.record_every = 3;
        Field u0 = eigenmode(wide, 1, 1, 1);
        const double a0 = grad_norm_sq(u0);
        const double l20 = norm(u0, 2.0);
        const double lam = eigenvalue(wide, 1, 1, 1);
        RunOutcome lr = integrate(u0, lin, *wk, exps, consts);
        double worst = 0.0;
        for (const TrajectoryRecord& r : lr.records) {
            const double decay = std::exp(-2.0 * lam * r.t);
            worst = std::max(worst, std::abs(r.a - a0 * decay) / (a0 * decay));
            const double l2ref = l20 * std::exp(-lam * r.t);
            worst = std::max(worst, std::abs(r.l2 - l2ref) / l2ref);
        }
        s.check_le("linear flow matches closed-form decay", worst, 1e-8);
        s.check_le("linear energy identity residual", energy_identity_residual(lr), 1e-6);
        s.check_le("linear mass-derivative residual", nehari_derivative_check(lr), 1e-6);
        s.check("linear run reports the horizon", lr.verdict == Verdict::HorizonReached);
    }

    if (!opts.quick) {
        SolverConfig cfg;
        cfg.t_end = 0.25;
        cfg.dt_init = 1e-5;
        cfg.dt_max = 5e-3;
        cfg.tol_step = 1e-6;
        cfg.record_every = 5;

        Field w = bubble(dom, {0.5, 0.5, 0.5}, 0.25);
        const EnergyReport base = energy_report(w, *kernel, exps, consts);
        const double theta_bar = nehari_scale(base.a, base.b, exps);

        // stable-side trajectory
        RunOutcome rw = integrate(scaled(w, 0.7 * theta_bar), cfg, *kernel, exps, consts);
        bool lyapunov_ok = true;
        const double tol_energy = 10.0 * cfg.tol_step;
        for (std::size_t i = 1; i < rw.records.size(); ++i)
            lyapunov_ok = lyapunov_ok &&
                          rw.records[i].j <= rw.records[i - 1].j + tol_energy;
        s.check("energy nonincreasing along the flow", lyapunov_ok);

        bool no_flip = true;
        bool saw_w = false, saw_v = false;
        for (const TrajectoryRecord& r : rw.records) {
            if (r.klass == WellClass::InW) saw_w = true;
            if (r.klass == WellClass::InV) saw_v = true;
        }
        no_flip = !(saw_w && saw_v);
        s.check("stable-start run never touches the unstable set", no_flip);

        // unstable-side trajectory
        double cv = 1.2;
        while (energy_report(scaled(w, cv * theta_bar), *kernel, exps, consts).j >=
               consts.m_mu)
            cv *= 1.15;
        RunOutcome rv = integrate(scaled(w, cv * theta_bar), cfg, *kernel, exps, consts);
        bool v_floor_ok = true, v_noflip = true;
        bool entered_v = false;
        const double a_floor = 2.0 * exps.p / (exps.p - 1.0) * consts.m_mu;
        for (const TrajectoryRecord& r : rv.records) {
            if (r.klass == WellClass::InV) entered_v = true;
            if (entered_v) {
                v_floor_ok = v_floor_ok && r.a >= a_floor * (1.0 - 1e-6);
                v_noflip = v_noflip && r.klass != WellClass::InW;
            }
        }
        s.check("unstable-start run stays out of the stable set", v_noflip);
        s.check("gradient mass floor inside the unstable set", entered_v && v_floor_ok);
        s.check("unstable entry forces blow-up", rv.verdict == Verdict::BlowUp);

        // mild-solution cross check
        Field small = scaled(w, 0.1);
        PicardResult pr = picard_mild_solve(small, 0.01, 16, 1e-10, 60, *kernel, exps);
        SolverConfig pcfg = cfg;
        pcfg.t_end = 0.01;
        pcfg.dt_max = 1e-4;
        RunOutcome pe = integrate(small, pcfg, *kernel, exps, consts);
        double diff = 0.0;
        for (std::size_t i = 0; i < pr.u.values.size(); ++i) {
            const double d = pr.u.values[i] - pe.final_state.values[i];
            diff += d * d;
        }
        const double h3 = std::pow(dom.h, 3);
        const double rel = std::sqrt(h3 * diff) / norm(pe.final_state, 2.0);
        s.check("mild-solution iteration converges", pr.converged);
        s.check_le("mild solution matches the stepper", rel, 1e-4);
        bool contracting = !pr.contraction.empty();
        for (double r : pr.contraction) contracting = contracting && r < 1.0;
        s.check("mild-solution iterates contract", contracting);

        // classifier consistency: pick a ray scale the report already
        // places inside the stable set
        double cw = 0.7;
        while (energy_report(scaled(w, cw * theta_bar), *kernel, exps, consts).klass !=
               WellClass::InW)
            cw *= 0.8;
        TrajectoryVerdict tv =
            classify_trajectory(scaled(w, cw * theta_bar), cfg, *kernel, exps, consts);
        s.check("stable start classifies as entering the stable set",
                tv.kind == TrajectoryVerdict::Kind::EntersW);
        if (tv.c_limit)
            s.check("settled energy limit is nonnegative", *tv.c_limit >= -1e-9);

        // ground state: descending quotient log and the depth power law
        QuotientResult qr = minimize_quotient(bubble(dom, {0.5, 0.5, 0.5}, 0.2), 60, 1e-7,
                                              *kernel, exps, consts);
        bool descending = true;
        for (std::size_t i = 1; i < qr.q_history.size(); ++i)
            descending = descending && qr.q_history[i] < qr.q_history[i - 1];
        s.check("quotient minimization log strictly decreases", descending);
        s.check("discrete quotient minimum respects the continuum bound",
                qr.q_min >= consts.s_hl * (1.0 - 0.02));
        const double m_expect = (5.0 - opts.mu) / (2.0 * (6.0 - opts.mu)) *
                                std::pow(qr.q_min, (6.0 - opts.mu) / (5.0 - opts.mu));
        s.check_le("well depth estimate follows the power law",
                   std::abs(qr.m_est - m_expect), 1e-12 * m_expect);
    }

    out << "verify: " << s.checks << " checks, " << s.failures << " failures\n";
    return s.failures;
}

}  // namespace potwell
