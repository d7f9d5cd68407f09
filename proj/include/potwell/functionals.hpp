#pragma once

#include <array>
#include <vector>

#include "potwell/grid.hpp"
#include "potwell/riesz.hpp"

namespace potwell {

/// Dimension is fixed at N = 3; the critical pair exponent is p = 6 - mu.
struct Exponents {
    static constexpr int N = 3;
    double mu;
    double p;  // 6 - mu

    explicit Exponents(double mu_);
};

/// p = (2N - mu)/(N - 2) = 6 - mu. Rejects mu outside (0,3).
double exponent_p(double mu);

/// Sharp constant of the double-integral inequality at the symmetric pair
/// exponent t = r = 6/(6-mu):
///   pi^{mu/2} Gamma(3/2 - mu/2)/Gamma(3 - mu/2) * (Gamma(3/2)/Gamma(3))^{-1+mu/3}.
double hls_constant(double mu);

/// Best Sobolev constant for N = 3: 3 pi (Gamma(3/2)/Gamma(3))^{2/3}.
double sobolev_constant();

struct Constants {
    double mu;
    double c_hls;   // sharp double-integral constant
    double s_sob;   // best Sobolev constant
    double s_hl;    // s_sob / c_hls^{1/(6-mu)}
    double m_mu;    // well depth ((5-mu)/(2(6-mu))) s_hl^{(6-mu)/(5-mu)}
};
Constants constants_build(double mu);

enum class WellClass { InW, InV, Neither, Zero };
char well_class_letter(WellClass k);

/// Scalars of one state: a = A(u), b = B(u), energy j = a/2 - b/(2p),
/// Nehari value i = a - b, and the well classification.
struct EnergyReport {
    double a = 0.0;
    double b = 0.0;
    double j = 0.0;
    double i = 0.0;
    WellClass klass = WellClass::Zero;
};

/// Zero and InW both belong to the stable set (0 is its base point).
bool in_stable_set(const EnergyReport& r);
bool in_unstable_set(const EnergyReport& r);

/// Fields below this sup-norm threshold classify as the zero element.
double zero_threshold(const BoxDomain& d);

/// B(u) = h^3 sum_x |u|^p Phi(x), Phi = riesz_apply(|u|^p). Nonnegative.
double compute_B(const Field& u, const RieszKernel& kernel, const Exponents& exps);

EnergyReport energy_report(const Field& u, const RieszKernel& kernel,
                           const Exponents& exps, const Constants& consts);

/// The unique ray scale with i(theta u) = 0: theta = (a/b)^{1/(2p-2)}.
/// Rejects a <= 0 or b <= 0.
double nehari_scale(double a, double b, const Exponents& exps);

/// Radial profile (width/(width^2 + |x-center|^2))^{1/2} sampled on the grid.
Field bubble(const BoxDomain& d, const std::array<double, 3>& center, double width);

struct HlsReport {
    double lhs = 0.0;  // B(u)
    double rhs = 0.0;  // c_hls ||u||_6^{2p}
    bool ok = false;
};
HlsReport hls_check(const Field& u, const RieszKernel& kernel,
                    const Exponents& exps, const Constants& consts);

struct C0Estimate {
    double value = 0.0;
    bool settled = false;  // false marks the estimate provisional
};

/// (2p/(p-1)) * (last J), settled when |dJ| over the last 10% of the series
/// stays below settle_tol * max(1, |J|).
C0Estimate c0_estimate(const std::vector<double>& j_values, const Exponents& exps,
                       double settle_tol = 1e-5);

}  // namespace potwell
