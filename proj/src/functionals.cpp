#include "potwell/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "potwell/spectral.hpp"

namespace potwell {

double exponent_p(double mu) {
    if (!(mu > 0.0 && mu < 3.0))
        throw std::invalid_argument("exponent_p: mu must lie in (0,3)");
    return 6.0 - mu;
}

Exponents::Exponents(double mu_) : mu(mu_), p(exponent_p(mu_)) {}

double hls_constant(double mu) {
    if (!(mu > 0.0 && mu < 3.0))
        throw std::invalid_argument("hls_constant: mu must lie in (0,3)");
    const double g32 = std::tgamma(1.5);  // sqrt(pi)/2
    const double g3 = 2.0;                // Gamma(3)
    return std::pow(M_PI, 0.5 * mu) * std::tgamma(1.5 - 0.5 * mu) /
           std::tgamma(3.0 - 0.5 * mu) * std::pow(g32 / g3, -1.0 + mu / 3.0);
}

double sobolev_constant() {
    const double g32 = std::tgamma(1.5);
    return 3.0 * M_PI * std::pow(g32 / 2.0, 2.0 / 3.0);
}

Constants constants_build(double mu) {
    Constants c;
    c.mu = mu;
    c.c_hls = hls_constant(mu);
    c.s_sob = sobolev_constant();
    c.s_hl = c.s_sob / std::pow(c.c_hls, 1.0 / (6.0 - mu));
    c.m_mu = (5.0 - mu) / (2.0 * (6.0 - mu)) * std::pow(c.s_hl, (6.0 - mu) / (5.0 - mu));
    return c;
}

char well_class_letter(WellClass k) {
    switch (k) {
        case WellClass::InW: return 'W';
        case WellClass::InV: return 'V';
        case WellClass::Neither: return 'N';
        case WellClass::Zero: return 'Z';
    }
    return '?';
}

bool in_stable_set(const EnergyReport& r) {
    return r.klass == WellClass::InW || r.klass == WellClass::Zero;
}

bool in_unstable_set(const EnergyReport& r) { return r.klass == WellClass::InV; }

double zero_threshold(const BoxDomain& d) {
    // Amplitude scale of an H1-normalized state is L^{-1/2}.
    return 1e-14 / std::sqrt(d.L);
}

double compute_B(const Field& u, const RieszKernel& kernel, const Exponents& exps) {
    if (u.domain != kernel.domain)
        throw std::invalid_argument("compute_B: field/kernel domain mismatch");
    if (kernel.mu != exps.mu)
        throw std::invalid_argument("compute_B: kernel.mu inconsistent with exponents");

    Field up(u.domain);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        up.values[i] = std::pow(std::abs(u.values[i]), exps.p);

    const Field phi = riesz_apply(kernel, up);
    return inner(up, phi);
}

EnergyReport energy_report(const Field& u, const RieszKernel& kernel,
                           const Exponents& exps, const Constants& consts) {
    EnergyReport r;
    r.a = grad_norm_sq(u);
    r.b = compute_B(u, kernel, exps);
    r.j = 0.5 * r.a - r.b / (2.0 * exps.p);
    r.i = r.a - r.b;

    double linf = norm(u, std::numeric_limits<double>::infinity());
    if (linf < zero_threshold(u.domain)) {
        r.klass = WellClass::Zero;
    } else if (r.j < consts.m_mu && r.i > 0.0) {
        r.klass = WellClass::InW;
    } else if (r.j < consts.m_mu && r.i < 0.0) {
        r.klass = WellClass::InV;
    } else {
        r.klass = WellClass::Neither;
    }
    return r;
}

double nehari_scale(double a, double b, const Exponents& exps) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("nehari_scale: requires a > 0 and b > 0");
    return std::pow(a / b, 1.0 / (2.0 * exps.p - 2.0));
}

Field bubble(const BoxDomain& d, const std::array<double, 3>& center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("bubble: width must be positive");
    for (double c : center)
        if (!(c > 0.0 && c < d.L))
            throw std::invalid_argument("bubble: center outside the open box");
    return sample(d, [&](double x, double y, double z) {
        const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
        return std::sqrt(width / (width * width + dx * dx + dy * dy + dz * dz));
    });
}

HlsReport hls_check(const Field& u, const RieszKernel& kernel,
                    const Exponents& exps, const Constants& consts) {
    HlsReport rep;
    rep.lhs = compute_B(u, kernel, exps);
    rep.rhs = consts.c_hls * std::pow(norm(u, 6.0), 2.0 * exps.p);
    rep.ok = rep.lhs <= rep.rhs + 1e-8 * std::max(1.0, rep.rhs);
    return rep;
}

C0Estimate c0_estimate(const std::vector<double>& j_values, const Exponents& exps,
                       double settle_tol) {
    C0Estimate est;
    if (j_values.empty()) return est;
    const double j_last = j_values.back();
    est.value = (2.0 * exps.p / (exps.p - 1.0)) * j_last;

    const std::size_t n = j_values.size();
    const std::size_t tail = std::max<std::size_t>(2, n / 10);
    if (n >= tail) {
        double dj = 0.0;
        for (std::size_t i = n - tail + 1; i < n; ++i)
            dj = std::max(dj, std::abs(j_values[i] - j_values[i - 1]));
        const double span = std::abs(j_values[n - tail] - j_last);
        est.settled = std::max(dj, span) <= settle_tol * std::max(1.0, std::abs(j_last));
    }
    return est;
}

}  // namespace potwell
