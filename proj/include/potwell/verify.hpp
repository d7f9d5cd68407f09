#pragma once

#include <ostream>

namespace potwell {

struct VerifyOptions {
    unsigned long seed = 7;
    double mu = 2.0;
    bool quick = false;  // skip the slow trajectory checks
};

/// Runs the invariant battery (transforms, convolution, functionals,
/// evolution, ground state, classifier consistency) and prints one line per
/// check. Returns the number of failures. Output is deterministic for a
/// fixed seed and thread count.
int run_verify(const VerifyOptions& opts, std::ostream& out);

}  // namespace potwell
