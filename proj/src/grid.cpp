#include "potwell/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace potwell {

BoxDomain::BoxDomain(double side, int interior_nodes) : L(side), M(interior_nodes) {
    if (!(L > 0.0)) throw std::invalid_argument("BoxDomain: side length must be positive");
    if (M < 2) throw std::invalid_argument("BoxDomain: need at least 2 interior nodes");
    h = L / (M + 1);
}

double norm(const Field& u, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : u.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("norm: exponent must be >= 1 or infinity");
    const double h3 = u.domain.h * u.domain.h * u.domain.h;
    double s = 0.0;
    if (p == 2.0) {
        for (double v : u.values) s += v * v;
    } else if (p == 1.0) {
        for (double v : u.values) s += std::abs(v);
    } else {
        for (double v : u.values) s += std::pow(std::abs(v), p);
    }
    return std::pow(h3 * s, 1.0 / p);
}

double inner(const Field& a, const Field& b) {
    if (a.domain != b.domain) throw std::invalid_argument("inner: domain mismatch");
    const double h3 = a.domain.h * a.domain.h * a.domain.h;
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return h3 * s;
}

bool all_finite(const Field& u) {
    for (double v : u.values)
        if (!std::isfinite(v)) return false;
    return true;
}

Field eigenmode(const BoxDomain& d, int k1, int k2, int k3) {
    if (k1 < 1 || k2 < 1 || k3 < 1 || k1 > d.M || k2 > d.M || k3 > d.M)
        throw std::invalid_argument("eigenmode: mode index out of range");
    const double w1 = k1 * M_PI / d.L, w2 = k2 * M_PI / d.L, w3 = k3 * M_PI / d.L;
    return sample(d, [&](double x, double y, double z) {
        return std::sin(w1 * x) * std::sin(w2 * y) * std::sin(w3 * z);
    });
}

Field scaled(const Field& u, double c) {
    Field v = u;
    for (double& x : v.values) x *= c;
    return v;
}

Field added(const Field& a, const Field& b) {
    if (a.domain != b.domain) throw std::invalid_argument("added: domain mismatch");
    Field v = a;
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] += b.values[i];
    return v;
}

}  // namespace potwell
