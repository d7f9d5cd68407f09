#include "potwell/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace potwell {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

SpectralField decay_multiply(const SpectralField& uh, double t) {
    SpectralField out(uh.domain);
    const int M = uh.domain.M;
    const double w = M_PI * M_PI / (uh.domain.L * uh.domain.L);
    std::size_t idx = 0;
    for (int kz = 1; kz <= M; ++kz)
        for (int ky = 1; ky <= M; ++ky) {
            const double syz = static_cast<double>(ky) * ky + static_cast<double>(kz) * kz;
            for (int kx = 1; kx <= M; ++kx, ++idx)
                out.coeffs[idx] =
                    std::exp(-w * (static_cast<double>(kx) * kx + syz) * t) * uh.coeffs[idx];
        }
    return out;
}
}  // namespace

void SolverConfig::validate() const {
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
        throw std::invalid_argument("SolverConfig: need 0 < dt_min <= dt_init <= dt_max");
    if (!(safety > 0.0 && safety < 1.0))
        throw std::invalid_argument("SolverConfig: safety must lie in (0,1)");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be positive");
    if (!(blowup_factor > 0.0))
        throw std::invalid_argument("SolverConfig: blowup_factor must be positive");
    if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every >= 1");
    if (!(tol_step > 0.0)) throw std::invalid_argument("SolverConfig: tol_step must be positive");
}

SpectralField semigroup_apply(const SpectralField& uh, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup_apply: t must be nonnegative");
    return decay_multiply(uh, t);
}

Field nonlinear_term(const Field& u, const RieszKernel& kernel, const Exponents& exps) {
    Field up(u.domain);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        up.values[i] = std::pow(std::abs(u.values[i]), exps.p);
    const Field phi = riesz_apply(kernel, up);

    const double q = exps.p - 2.0;
    Field f(u.domain);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double v = u.values[i];
        f.values[i] = phi.values[i] * std::pow(std::abs(v), q) * v;
    }
    return f;
}

StepResult step(const Field& u, double dt, const SolverConfig& cfg,
                const RieszKernel& kernel, const Exponents& exps) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    StepResult res;

    const SpectralField uh = dst_forward(u);
    if (!cfg.nonlinearity_on) {
        res.u = dst_inverse(semigroup_apply(uh, dt));
        res.error_estimate = 0.0;
        return res;
    }

    const Field f0 = nonlinear_term(u, kernel, exps);
    if (!all_finite(f0)) {
        res.u = u;
        res.overflow = true;
        return res;
    }
    const SpectralField f0h = dst_forward(f0);

    // predictor: e^{dt L}(u + dt f(u))
    SpectralField ph(u.domain);
    for (std::size_t i = 0; i < ph.coeffs.size(); ++i)
        ph.coeffs[i] = uh.coeffs[i] + dt * f0h.coeffs[i];
    ph = decay_multiply(ph, dt);
    const Field pred = dst_inverse(ph);

    const Field f1 = nonlinear_term(pred, kernel, exps);
    if (!all_finite(f1)) {
        res.u = pred;
        res.overflow = true;
        return res;
    }
    const SpectralField f1h = dst_forward(f1);

    // corrector: e^{dt L} u + dt/2 (e^{dt L} f(u) + f(u~))
    SpectralField ch(u.domain);
    for (std::size_t i = 0; i < ch.coeffs.size(); ++i)
        ch.coeffs[i] = uh.coeffs[i] + 0.5 * dt * f0h.coeffs[i];
    ch = decay_multiply(ch, dt);
    for (std::size_t i = 0; i < ch.coeffs.size(); ++i)
        ch.coeffs[i] += 0.5 * dt * f1h.coeffs[i];

    res.u = dst_inverse(ch);
    // corrector - predictor = dt/2 (f(u~) - e^{dt L} f(u)), an O(dt^2) probe
    // of the Duhamel quadrature error.
    double diff2 = 0.0;
    for (std::size_t i = 0; i < res.u.values.size(); ++i) {
        const double d = res.u.values[i] - pred.values[i];
        diff2 += d * d;
    }
    const double h = u.domain.h;
    res.error_estimate = std::sqrt(h * h * h * diff2);
    if (!std::isfinite(res.error_estimate)) res.overflow = true;
    return res;
}

namespace {

TrajectoryRecord make_record(double t, double dt, double dissipation, const Field& u,
                             const RieszKernel& kernel, const Exponents& exps,
                             const Constants& consts, bool nonlinearity_on) {
    TrajectoryRecord rec;
    rec.t = t;
    rec.dt = dt;
    rec.dissipation = dissipation;
    rec.l2 = norm(u, 2.0);
    rec.linf = norm(u, kInf);
    if (nonlinearity_on) {
        const EnergyReport er = energy_report(u, kernel, exps, consts);
        rec.a = er.a;
        rec.b = er.b;
        rec.j = er.j;
        rec.i = er.i;
        rec.klass = er.klass;
    } else {
        // Linear flow: the evolution has no pair term, so the recorded
        // functionals drop it too and the identities stay exact.
        rec.a = grad_norm_sq(u);
        rec.b = 0.0;
        rec.j = 0.5 * rec.a;
        rec.i = rec.a;
        if (rec.linf < zero_threshold(u.domain))
            rec.klass = WellClass::Zero;
        else
            rec.klass = (rec.j < consts.m_mu) ? WellClass::InW : WellClass::Neither;
    }
    return rec;
}

// Last accepted time plus a geometric tail extrapolated from the recent dt
// ratios; a heuristic estimate, reported as such.
double estimate_blowup_time(double t, const std::deque<double>& recent_dt) {
    if (recent_dt.size() < 3) return t;
    double ratio = 0.0;
    int n = 0;
    for (std::size_t i = 1; i < recent_dt.size(); ++i) {
        if (recent_dt[i - 1] > 0.0) {
            ratio += recent_dt[i] / recent_dt[i - 1];
            ++n;
        }
    }
    if (n == 0) return t;
    ratio = std::min(ratio / n, 0.99);
    if (ratio <= 0.0) return t;
    return t + recent_dt.back() * ratio / (1.0 - ratio);
}

bool strictly_increasing(const std::deque<double>& xs) {
    if (xs.size() < 2) return false;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) return false;
    return true;
}

}  // namespace

RunOutcome integrate(const Field& u0, const SolverConfig& cfg, const RieszKernel& kernel,
                     const Exponents& exps, const Constants& consts) {
    cfg.validate();
    RunOutcome out;

    Field u = u0;
    double t = 0.0;
    double dt = cfg.dt_init;
    double dissipation = 0.0;
    long accepted = 0;

    const double linf0 = norm(u0, kInf);
    const double blowup_linf = cfg.blowup_factor * std::max(linf0, zero_threshold(u0.domain));
    std::deque<double> recent_linf{linf0};
    std::deque<double> recent_dt;

    out.records.push_back(
        make_record(0.0, dt, 0.0, u, kernel, exps, consts, cfg.nonlinearity_on));

    bool blew_up = false;
    double t_blowup = 0.0;

    const double h3 = u.domain.h * u.domain.h * u.domain.h;
    while (t < cfg.t_end) {
        const double dt_try = std::min(dt, cfg.t_end - t);
        StepResult sr = step(u, dt_try, cfg, kernel, exps);

        if (sr.overflow) {
            blew_up = true;
            u = sr.u;
            t_blowup = estimate_blowup_time(t, recent_dt);
            break;
        }

        const bool at_floor = dt_try <= cfg.dt_min * (1.0 + 1e-12);
        if (sr.error_estimate > cfg.tol_step && !at_floor) {
            // reject and retry with a smaller step
            dt = std::max(cfg.dt_min,
                          cfg.safety * dt_try *
                              std::sqrt(cfg.tol_step / sr.error_estimate));
            continue;
        }

        // accept
        double du2 = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            const double d = sr.u.values[i] - u.values[i];
            du2 += d * d;
        }
        dissipation += h3 * du2 / dt_try;  // ||du/dt||_2^2 * dt
        u = std::move(sr.u);
        t += dt_try;
        ++accepted;

        const double linf = norm(u, kInf);
        recent_linf.push_back(linf);
        if (recent_linf.size() > 10) recent_linf.pop_front();
        recent_dt.push_back(dt_try);
        if (recent_dt.size() > 6) recent_dt.pop_front();

        if (accepted % cfg.record_every == 0 && t < cfg.t_end) {
            out.records.push_back(make_record(t, dt_try, dissipation, u, kernel, exps,
                                              consts, cfg.nonlinearity_on));
        }

        if (cfg.nonlinearity_on) {
            const bool runaway = linf > blowup_linf;
            const bool stalled_growth =
                at_floor && recent_linf.size() >= 10 && strictly_increasing(recent_linf);
            if (runaway || stalled_growth) {
                blew_up = true;
                t_blowup = estimate_blowup_time(t, recent_dt);
                break;
            }
        }

        const double err = std::max(sr.error_estimate, 1e-300);
        dt = std::clamp(cfg.safety * dt_try * std::sqrt(cfg.tol_step / err), cfg.dt_min,
                        cfg.dt_max);
    }

    // terminal record (records always end at the final state)
    if (out.records.empty() || out.records.back().t != t) {
        if (all_finite(u)) {
            out.records.push_back(make_record(t, dt, dissipation, u, kernel, exps, consts,
                                              cfg.nonlinearity_on));
        }
    }

    out.final_state = u;
    if (blew_up) {
        out.verdict = Verdict::BlowUp;
        out.t_event = t_blowup;
        out.blowup_snapshot = true;
        return out;
    }

    // Horizon reached: report a well entry when the trajectory moved into a
    // set it did not start in.
    auto in_w = [](const TrajectoryRecord& r) {
        return r.klass == WellClass::InW || r.klass == WellClass::Zero;
    };
    auto in_v = [](const TrajectoryRecord& r) { return r.klass == WellClass::InV; };

    out.verdict = Verdict::HorizonReached;
    out.t_event = t;
    if (cfg.nonlinearity_on && !out.records.empty() && !in_w(out.records.front()) &&
        !in_v(out.records.front())) {
        for (const TrajectoryRecord& r : out.records) {
            if (in_w(r)) {
                out.verdict = Verdict::EnteredW;
                out.t_event = r.t;
                break;
            }
            if (in_v(r)) {
                out.verdict = Verdict::EnteredV;
                out.t_event = r.t;
                break;
            }
        }
    }
    return out;
}

PicardResult picard_mild_solve(const Field& u0, double T, int n_time, double tol,
                               int max_iter, const RieszKernel& kernel,
                               const Exponents& exps, bool nonlinearity_on) {
    if (!(T > 0.0)) throw std::invalid_argument("picard_mild_solve: T must be positive");
    if (n_time < 1) throw std::invalid_argument("picard_mild_solve: n_time >= 1");

    const int n = n_time;
    const double dtau = T / n;
    const SpectralField u0h = dst_forward(u0);

    // free-flow trajectory e^{t_i L} u0
    std::vector<Field> current;
    current.reserve(n + 1);
    for (int i = 0; i <= n; ++i)
        current.push_back(dst_inverse(semigroup_apply(u0h, i * dtau)));

    PicardResult res;
    res.u = current.back();
    double prev_change = -1.0;

    if (!nonlinearity_on) {
        res.iterations = 1;
        res.converged = true;
        return res;
    }

    for (int it = 1; it <= max_iter; ++it) {
        // nonlinear term at every node of the current iterate
        std::vector<SpectralField> fh;
        fh.reserve(n + 1);
        for (int i = 0; i <= n; ++i) {
            Field f = nonlinear_term(current[i], kernel, exps);
            if (!all_finite(f)) {
                res.iterations = it;
                res.converged = false;
                return res;
            }
            fh.push_back(dst_forward(f));
        }

        std::vector<Field> next;
        next.reserve(n + 1);
        next.push_back(u0);
        double change = 0.0;
        for (int i = 1; i <= n; ++i) {
            SpectralField acc = semigroup_apply(u0h, i * dtau);
            for (int j = 0; j <= i; ++j) {
                const double w = (j == 0 || j == i) ? 0.5 * dtau : dtau;
                const SpectralField prop = semigroup_apply(fh[j], (i - j) * dtau);
                for (std::size_t m = 0; m < acc.coeffs.size(); ++m)
                    acc.coeffs[m] += w * prop.coeffs[m];
            }
            Field ui = dst_inverse(acc);
            double diff = 0.0, ref = 0.0;
            for (std::size_t m = 0; m < ui.values.size(); ++m) {
                const double d = ui.values[m] - current[i].values[m];
                diff += d * d;
                ref += ui.values[m] * ui.values[m];
            }
            change = std::max(change, std::sqrt(diff / std::max(ref, 1e-300)));
            next.push_back(std::move(ui));
        }

        current = std::move(next);
        res.iterations = it;
        if (prev_change > 0.0) res.contraction.push_back(change / prev_change);
        if (change < tol) {
            res.converged = true;
            break;
        }
        prev_change = change;
    }

    res.u = current.back();
    return res;
}

double energy_identity_residual(const RunOutcome& outcome) {
    if (outcome.records.size() < 2)
        throw std::invalid_argument("energy_identity_residual: need at least 2 records");
    const double j0 = outcome.records.front().j;
    double worst = 0.0;
    for (const TrajectoryRecord& r : outcome.records)
        worst = std::max(worst, std::abs(r.dissipation + r.j - j0));
    return worst / std::max(1.0, std::abs(j0));
}

double nehari_derivative_check(const RunOutcome& outcome) {
    const auto& rs = outcome.records;
    if (rs.size() < 3)
        throw std::invalid_argument("nehari_derivative_check: need at least 3 records");
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < rs.size(); ++k) {
        const double t0 = rs[k - 1].t, t1 = rs[k].t, t2 = rs[k + 1].t;
        const double y0 = 0.5 * rs[k - 1].l2 * rs[k - 1].l2;
        const double y1 = 0.5 * rs[k].l2 * rs[k].l2;
        const double y2 = 0.5 * rs[k + 1].l2 * rs[k + 1].l2;
        const double dl = t1 - t0, dr = t2 - t1;
        if (!(dl > 0.0 && dr > 0.0)) continue;
        // centered difference on a nonuniform pair of intervals
        const double deriv = (dl * (y2 - y1) / dr + dr * (y1 - y0) / dl) / (dl + dr);
        worst = std::max(worst,
                         std::abs(deriv + rs[k].i) / std::max(1.0, std::abs(rs[k].i)));
    }
    return worst;
}

Field scale_field(const Field& u, double lambda, const std::array<double, 3>& x0) {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale_field: lambda must be positive");
    const BoxDomain& src = u.domain;
    BoxDomain dst(lambda * src.L, src.M);

    const double amp = std::pow(lambda, -0.5);
    const double h = src.h;
    const int M = src.M;

    // value of u at an arbitrary point by trilinear interpolation on the
    // Dirichlet zero extension (boundary and exterior are 0)
    auto interp = [&](double x, double y, double z) -> double {
        if (x <= 0.0 || x >= src.L || y <= 0.0 || y >= src.L || z <= 0.0 || z >= src.L)
            return 0.0;
        const double gx = x / h - 1.0, gy = y / h - 1.0, gz = z / h - 1.0;
        const int ix = static_cast<int>(std::floor(gx));
        const int iy = static_cast<int>(std::floor(gy));
        const int iz = static_cast<int>(std::floor(gz));
        const double fx = gx - ix, fy = gy - iy, fz = gz - iz;
        auto node = [&](int a, int b, int c) -> double {
            if (a < 0 || b < 0 || c < 0 || a >= M || b >= M || c >= M) return 0.0;
            return u.values[src.index(a, b, c)];
        };
        double v = 0.0;
        for (int dz = 0; dz <= 1; ++dz)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dx = 0; dx <= 1; ++dx) {
                    const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) *
                                     (dz ? fz : 1.0 - fz);
                    v += w * node(ix + dx, iy + dy, iz + dz);
                }
        return v;
    };

    return sample(dst, [&](double yx, double yy, double yz) {
        return amp * interp(x0[0] + yx / lambda, x0[1] + yy / lambda, x0[2] + yz / lambda);
    });
}

}  // namespace potwell
