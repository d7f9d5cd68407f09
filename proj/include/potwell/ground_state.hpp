#pragma once

#include "potwell/functionals.hpp"
#include "potwell/grid.hpp"
#include "potwell/riesz.hpp"

namespace potwell {

struct QuotientResult {
    double q_min = 0.0;
    Field minimizer;
    double m_est = 0.0;  // ((5-mu)/(2(6-mu))) q_min^{(6-mu)/(5-mu)}
    int iterations = 0;
    double grad_norm_final = 0.0;
    std::vector<double> q_history;  // strictly decreasing across accepted steps
    bool stalled = false;           // line search failed 30 times
};

/// Q(u) = A(u) / B(u)^{1/(6-mu)}; scale invariant. Rejects the zero field.
double quotient(const Field& u, const RieszKernel& kernel, const Exponents& exps);

/// H^1-preconditioned projected gradient descent on Q with backtracking
/// line search (strict decrease) and per-step L2 renormalization. Stops on
/// relative Q-decrease < tol or max_iter.
QuotientResult minimize_quotient(const Field& u_init, int max_iter, double tol,
                                 const RieszKernel& kernel, const Exponents& exps,
                                 const Constants& consts);

}  // namespace potwell
