#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "potwell/evolution.hpp"

using namespace potwell;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_l2_diff(const Field& a, const Field& b) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        diff += d * d;
        ref += b.values[i] * b.values[i];
    }
    return std::sqrt(diff / std::max(ref, 1e-300));
}
}  // namespace

TEST_CASE("heat semigroup: identity, eigen decay, composition law") {
    BoxDomain d(1.0, 8);
    std::mt19937_64 rng(91);
    SpectralField uh = dst_forward(oracles::random_smooth(d, rng, 4));

    SpectralField id = semigroup_apply(uh, 0.0);
    for (std::size_t i = 0; i < uh.coeffs.size(); ++i)
        CHECK(id.coeffs[i] == uh.coeffs[i]);

    SpectralField mode = dst_forward(eigenmode(d, 1, 1, 1));
    SpectralField decayed = semigroup_apply(mode, 0.1);
    CHECK(decayed.coeffs[d.index(0, 0, 0)] ==
          doctest::Approx(std::exp(-0.3 * M_PI * M_PI) * mode.coeffs[d.index(0, 0, 0)])
              .epsilon(1e-13));

    SpectralField two = semigroup_apply(semigroup_apply(uh, 0.07), 0.05);
    SpectralField one = semigroup_apply(uh, 0.12);
    for (std::size_t i = 0; i < uh.coeffs.size(); ++i)
        CHECK(two.coeffs[i] == doctest::Approx(one.coeffs[i]).epsilon(1e-13));

    CHECK_THROWS_AS(semigroup_apply(uh, -0.1), std::invalid_argument);
}

TEST_CASE("nonlinear term: zero, oddness, homogeneity") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    RieszKernel k = kernel_build(d, 2.0);

    Field fz = nonlinear_term(Field(d), k, exps);
    for (double v : fz.values) CHECK(v == 0.0);

    std::mt19937_64 rng(101);
    Field u = oracles::random_smooth(d, rng, 3);
    Field fu = nonlinear_term(u, k, exps);
    Field fnu = nonlinear_term(scaled(u, -1.0), k, exps);
    for (std::size_t i = 0; i < fu.values.size(); ++i)
        CHECK(fnu.values[i] == -fu.values[i]);  // exact sign flip

    const double c = 1.7;
    Field fcu = nonlinear_term(scaled(u, c), k, exps);
    const double factor = std::pow(c, 2.0 * exps.p - 1.0);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < fu.values.size(); ++i) {
        worst = std::max(worst, std::abs(fcu.values[i] - factor * fu.values[i]));
        scale = std::max(scale, std::abs(factor * fu.values[i]));
    }
    CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("step: linear case reduces to the exact semigroup") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    SolverConfig cfg;
    cfg.nonlinearity_on = false;

    Field u = eigenmode(d, 2, 1, 1);
    const double dt = 3e-3;
    StepResult sr = step(u, dt, cfg, k, exps);
    CHECK(sr.error_estimate == 0.0);
    const double decay = std::exp(-eigenvalue(d, 2, 1, 1) * dt);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(sr.u.values[i] == doctest::Approx(decay * u.values[i]).epsilon(1e-12));
}

TEST_CASE("step: one dt step vs two dt/2 steps converges at third order") {
    BoxDomain d(1.0, 12);
    const Exponents exps(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    SolverConfig cfg;

    // boundary-compatible smooth data (finite sine series) keeps the
    // ladder in the asymptotic regime
    Field u = added(eigenmode(d, 1, 1, 1), scaled(eigenmode(d, 2, 1, 2), 0.3));
    auto ladder_gap = [&](double dt) {
        Field one = step(u, dt, cfg, k, exps).u;
        Field half = step(step(u, 0.5 * dt, cfg, k, exps).u, 0.5 * dt, cfg, k, exps).u;
        double s = 0.0;
        for (std::size_t i = 0; i < one.values.size(); ++i) {
            const double e = one.values[i] - half.values[i];
            s += e * e;
        }
        return std::sqrt(s);
    };
    const double g1 = ladder_gap(1e-3);
    const double g2 = ladder_gap(0.5e-3);
    const double order = std::log2(g1 / g2);
    CHECK(order >= 1.9);
}

TEST_CASE("step: positive smooth data stays positive over a small step") {
    BoxDomain d(1.0, 12);
    const Exponents exps(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    SolverConfig cfg;
    Field u = sample(d, [](double x, double y, double z) {
        const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5) + (z - 0.5) * (z - 0.5);
        return std::exp(-30.0 * r2);
    });
    StepResult sr = step(u, 1e-4, cfg, k, exps);
    double min_v = 0.0;
    for (double v : sr.u.values) min_v = std::min(min_v, v);
    CHECK(min_v >= -1e-10 * norm(u, kInf));
}

TEST_CASE("integrate: small data reaches the horizon inside the stable set") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    const Constants consts = constants_build(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    SolverConfig cfg;
    cfg.t_end = 0.05;
    cfg.dt_init = 1e-5;
    cfg.dt_max = 1e-3;
    cfg.record_every = 5;

    RunOutcome out = integrate(scaled(eigenmode(d, 1, 1, 1), 1e-3), cfg, k, exps, consts);
    CHECK(out.verdict == Verdict::HorizonReached);
    CHECK(out.records.back().linf < out.records.front().linf);
    for (const TrajectoryRecord& r : out.records) {
        CHECK((r.klass == WellClass::InW || r.klass == WellClass::Zero));
        CHECK(r.dissipation >= 0.0);
    }
    // dissipation is nondecreasing
    for (std::size_t i = 1; i < out.records.size(); ++i)
        CHECK(out.records[i].dissipation >= out.records[i - 1].dissipation);
}

TEST_CASE("integrate: unstable-set start blows up with growing sup norm") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    const Constants consts = constants_build(2.0);
    RieszKernel k = kernel_build(d, 2.0);

    Field w = bubble(d, {0.5, 0.5, 0.5}, 0.25);
    const double a = grad_norm_sq(w);
    const double b = compute_B(w, k, exps);
    double c = 1.2 * nehari_scale(a, b, exps);
    while (energy_report(scaled(w, c), k, exps, consts).klass != WellClass::InV)
        c *= 1.15;

    SolverConfig cfg;
    cfg.t_end = 5.0;
    cfg.dt_init = 1e-6;
    cfg.dt_max = 1e-3;
    cfg.tol_step = 1e-5;
    cfg.blowup_factor = 1e4;
    cfg.record_every = 5;

    RunOutcome out = integrate(scaled(w, c), cfg, k, exps, consts);
    CHECK(out.verdict == Verdict::BlowUp);
    CHECK(out.t_event >= out.records.back().t);
    CHECK(out.records.back().linf > out.records.front().linf);
    // sup norm grows monotonically across the last records
    const auto& rs = out.records;
    for (std::size_t i = rs.size() - std::min<std::size_t>(3, rs.size()) + 1; i < rs.size(); ++i)
        CHECK(rs[i].linf >= rs[i - 1].linf);
}

TEST_CASE("integrate: linear flow matches closed-form decay to 1e-8") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    const Constants consts = constants_build(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    SolverConfig cfg;
    cfg.nonlinearity_on = false;
    cfg.t_end = 0.4;
    cfg.dt_max = 5e-3;
    cfg.record_every = 7;

    Field u0 = added(eigenmode(d, 1, 1, 1), scaled(eigenmode(d, 2, 2, 1), 0.5));
    const SpectralField u0h = dst_forward(u0);
    RunOutcome out = integrate(u0, cfg, k, exps, consts);
    CHECK(out.verdict == Verdict::HorizonReached);

    const double w = parseval_weight(d);
    const double l1 = eigenvalue(d, 1, 1, 1), l2m = eigenvalue(d, 2, 2, 1);
    const double c1 = u0h.coeffs[d.index(0, 0, 0)];
    const double c2 = u0h.coeffs[d.index(1, 1, 0)];
    for (const TrajectoryRecord& r : out.records) {
        const double a_ref = w * (l1 * c1 * c1 * std::exp(-2.0 * l1 * r.t) +
                                  l2m * c2 * c2 * std::exp(-2.0 * l2m * r.t));
        const double l2_ref = std::sqrt(w * (c1 * c1 * std::exp(-2.0 * l1 * r.t) +
                                             c2 * c2 * std::exp(-2.0 * l2m * r.t)));
        CHECK(r.a == doctest::Approx(a_ref).epsilon(1e-8));
        CHECK(r.l2 == doctest::Approx(l2_ref).epsilon(1e-8));
    }
}

TEST_CASE("linear identities: quadrature residuals below 1e-6 at fine dt") {
    // dissipation error scales like (lambda dt)^2 and the centered
    // difference like (lambda dt_rec)^2; a wide box keeps both tiny
    BoxDomain d(3.0, 8);
    const Exponents exps(2.0);
    const Constants consts = constants_build(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    SolverConfig cfg;
    cfg.nonlinearity_on = false;
    cfg.t_end = 0.3;
    cfg.dt_init = 1e-5;
    cfg.dt_max = 1e-4;
    cfg.record_every = 3;

    RunOutcome out = integrate(eigenmode(d, 1, 1, 1), cfg, k, exps, consts);
    CHECK(out.verdict == Verdict::HorizonReached);
    CHECK(energy_identity_residual(out) <= 1e-6);
    CHECK(nehari_derivative_check(out) <= 1e-6);
}

TEST_CASE("energy identity residual shrinks with the step tolerance") {
    BoxDomain d(1.0, 12);
    const Exponents exps(2.0);
    const Constants consts = constants_build(2.0);
    RieszKernel k = kernel_build(d, 2.0);

    Field w = bubble(d, {0.5, 0.5, 0.5}, 0.25);
    const double theta = nehari_scale(grad_norm_sq(w), compute_B(w, k, exps), exps);
    Field u0 = scaled(w, 0.7 * theta);

    SolverConfig cfg;
    cfg.t_end = 0.1;
    cfg.dt_init = 1e-6;
    cfg.dt_max = 5e-3;
    cfg.tol_step = 1e-5;
    cfg.record_every = 5;

    RunOutcome r1 = integrate(u0, cfg, k, exps, consts);
    const double res1 = energy_identity_residual(r1);
    CHECK(res1 <= 1e-3);

    cfg.tol_step = 0.5e-5;
    RunOutcome r2 = integrate(u0, cfg, k, exps, consts);
    const double res2 = energy_identity_residual(r2);
    CHECK(res2 <= res1 / 1.5);

    // the energy is nonincreasing up to the step tolerance
    for (std::size_t i = 1; i < r1.records.size(); ++i)
        CHECK(r1.records[i].j <= r1.records[i - 1].j + 10.0 * 1e-5);
}

TEST_CASE("mass-derivative identity: residual drops under denser recording") {
    BoxDomain d(1.0, 12);
    const Exponents exps(2.0);
    const Constants consts = constants_build(2.0);
    RieszKernel k = kernel_build(d, 2.0);

    // smooth (boundary-compatible) stable-set start
    Field w = eigenmode(d, 1, 1, 1);
    const double theta = nehari_scale(grad_norm_sq(w), compute_B(w, k, exps), exps);
    Field u0 = scaled(w, 0.7 * theta);

    SolverConfig cfg;
    cfg.t_end = 0.1;
    cfg.dt_max = 1e-3;
    cfg.tol_step = 1e-6;
    cfg.record_every = 10;

    const double coarse = nehari_derivative_check(integrate(u0, cfg, k, exps, consts));
    CHECK(coarse <= 5e-2);
    cfg.record_every = 3;
    const double dense = nehari_derivative_check(integrate(u0, cfg, k, exps, consts));
    CHECK(dense < coarse);
}

TEST_CASE("mild-solution iteration: free flow returned after one sweep") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    std::mt19937_64 rng(131);
    Field u0 = oracles::random_smooth(d, rng, 3);
    const double T = 0.05;

    PicardResult pr = picard_mild_solve(u0, T, 8, 1e-12, 30, k, exps, false);
    CHECK(pr.converged);
    CHECK(pr.iterations == 1);
    Field expect = dst_inverse(semigroup_apply(dst_forward(u0), T));
    for (std::size_t i = 0; i < expect.values.size(); ++i)
        CHECK(pr.u.values[i] == doctest::Approx(expect.values[i]).epsilon(1e-13));
}

TEST_CASE("mild-solution iteration: divergence reported for large data") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    Field big = scaled(bubble(d, {0.5, 0.5, 0.5}, 0.25), 50.0);
    PicardResult pr = picard_mild_solve(big, 0.5, 8, 1e-10, 25, k, exps);
    CHECK(!pr.converged);
}

TEST_CASE("step: non-finite nonlinearity reports overflow") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    RieszKernel k = kernel_build(d, 2.0);
    SolverConfig cfg;
    Field huge(d);
    for (double& v : huge.values) v = 1e60;  // |u|^{2p-1} overflows a double
    StepResult sr = step(huge, 1e-6, cfg, k, exps);
    CHECK(sr.overflow);
}

TEST_CASE("mild-solution iteration: linear exactness and stepper agreement") {
    BoxDomain d(1.0, 8);
    const Exponents exps(2.0);
    const Constants consts = constants_build(2.0);
    RieszKernel k = kernel_build(d, 2.0);

    Field u0 = scaled(bubble(d, {0.5, 0.5, 0.5}, 0.25), 0.2);
    const double T = 0.01;

    PicardResult pr = picard_mild_solve(u0, T, 16, 1e-10, 60, k, exps);
    CHECK(pr.converged);
    CHECK(!pr.contraction.empty());
    for (double r : pr.contraction) CHECK(r < 1.0);

    SolverConfig cfg;
    cfg.t_end = T;
    cfg.dt_init = 1e-6;
    cfg.dt_max = 1e-4;
    cfg.tol_step = 1e-8;
    RunOutcome er = integrate(u0, cfg, k, exps, consts);
    CHECK(rel_l2_diff(pr.u, er.final_state) <= 1e-4);
}

TEST_CASE("field rescaling: identity, norm scaling, energy invariance") {
    BoxDomain d(1.0, 16);
    Field u = bubble(d, {0.5, 0.5, 0.5}, 0.15);

    Field same = scale_field(u, 1.0, {0.0, 0.0, 0.0});
    CHECK(same.domain.L == doctest::Approx(1.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        worst = std::max(worst, std::abs(same.values[i] - u.values[i]));
    CHECK(worst <= 1e-14 * norm(u, kInf));

    // node-aligned map (x0 = 0): exact norm scaling
    const double lambda = 1.5;
    Field v = scale_field(u, lambda, {0.0, 0.0, 0.0});
    CHECK(v.domain.L == doctest::Approx(lambda * d.L));
    CHECK(norm(v, 2.0) == doctest::Approx(lambda * norm(u, 2.0)).epsilon(1e-13));

    // off-node map: interpolation keeps the identity within 1%
    Field voff = scale_field(u, lambda, {0.013, -0.007, 0.004});
    CHECK(norm(voff, 2.0) == doctest::Approx(lambda * norm(u, 2.0)).epsilon(0.01));
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.dt_min = 1.0;  // violates dt_min <= dt_init
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    SolverConfig ok;
    CHECK_NOTHROW(ok.validate());
    ok.safety = 1.5;
    CHECK_THROWS_AS(ok.validate(), std::invalid_argument);
}
