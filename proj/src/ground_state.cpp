#include "potwell/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "potwell/evolution.hpp"
#include "potwell/spectral.hpp"

namespace potwell {

namespace {

double m_from_quotient(double q, double mu) {
    return (5.0 - mu) / (2.0 * (6.0 - mu)) * std::pow(q, (6.0 - mu) / (5.0 - mu));
}

Field normalized_l2(const Field& u) {
    const double n = norm(u, 2.0);
    if (!(n > 0.0)) throw std::invalid_argument("minimize_quotient: zero field");
    return scaled(u, 1.0 / n);
}

}  // namespace

double quotient(const Field& u, const RieszKernel& kernel, const Exponents& exps) {
    const double linf = norm(u, std::numeric_limits<double>::infinity());
    if (!(linf > 0.0)) throw std::invalid_argument("quotient: zero field");
    const double a = grad_norm_sq(u);
    const double b = compute_B(u, kernel, exps);
    return a / std::pow(b, 1.0 / (6.0 - exps.mu));
}

QuotientResult minimize_quotient(const Field& u_init, int max_iter, double tol,
                                 const RieszKernel& kernel, const Exponents& exps,
                                 const Constants& consts) {
    (void)consts;
    QuotientResult res;
    Field u = normalized_l2(u_init);

    const double sigma = 1.0 / (6.0 - exps.mu);
    double q = quotient(u, kernel, exps);
    res.q_history.push_back(q);
    res.q_min = q;
    res.minimizer = u;

    double alpha = 0.25;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const SpectralField uh = dst_forward(u);
        const double a = grad_norm_sq(uh);
        const double b = compute_B(u, kernel, exps);
        const Field f = nonlinear_term(u, kernel, exps);

        // L2 gradient of Q = A B^{-sigma}:
        //   g = -2 B^{-sigma} (Lap u) - 2 p sigma A B^{-sigma-1} f(u).
        // Preconditioning by (-Lap)^{-1} turns the first term back into u,
        // the H^1 steepest-descent direction:
        //   d = -(2 B^{-sigma} u - 2 p sigma A B^{-sigma-1} (-Lap)^{-1} f).
        const double bs = std::pow(b, -sigma);
        const double c1 = 2.0 * bs;
        const double c2 = 2.0 * exps.p * sigma * a * bs / b;
        const Field finv = dst_inverse(inverse_laplacian_apply(dst_forward(f)));
        Field dir(u.domain);
        for (std::size_t m = 0; m < dir.values.size(); ++m)
            dir.values[m] = c2 * finv.values[m] - c1 * u.values[m];

        {
            double g2 = 0.0;
            for (std::size_t m = 0; m < dir.values.size(); ++m)
                g2 += dir.values[m] * dir.values[m];
            const double h = u.domain.h;
            res.grad_norm_final = std::sqrt(h * h * h * g2);
        }

        // backtracking line search, strict decrease required
        double step_len = std::min(alpha * 4.0, 1.0);
        bool accepted = false;
        for (int trial = 0; trial < 30; ++trial) {
            Field cand = u;
            for (std::size_t m = 0; m < cand.values.size(); ++m)
                cand.values[m] += step_len * dir.values[m];
            const double cn = norm(cand, 2.0);
            if (cn > 0.0) {
                for (double& v : cand.values) v /= cn;
                const double qc = quotient(cand, kernel, exps);
                if (qc < q) {
                    u = std::move(cand);
                    q = qc;
                    alpha = step_len;
                    accepted = true;
                    break;
                }
            }
            step_len *= 0.5;
        }
        if (!accepted) {
            res.stalled = true;
            break;
        }

        res.q_history.push_back(q);
        if (q < res.q_min) {
            res.q_min = q;
            res.minimizer = u;
        }
        const double prev = res.q_history[res.q_history.size() - 2];
        if ((prev - q) / q < tol) {
            ++iter;
            break;
        }
    }

    res.iterations = iter;
    res.m_est = m_from_quotient(res.q_min, exps.mu);
    return res;
}

}  // namespace potwell
