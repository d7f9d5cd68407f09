#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace potwell {

/// Cube (0,L)^3 with homogeneous Dirichlet data, discretized by M interior
/// nodes per dimension at spacing h = L/(M+1). Boundary values are
/// implicitly zero and never stored.
struct BoxDomain {
    double L = 1.0;
    int M = 8;
    double h = 1.0 / 9.0;

    BoxDomain() = default;
    BoxDomain(double side, int interior_nodes);

    std::size_t size() const { return static_cast<std::size_t>(M) * M * M; }

    /// Coordinate of interior node i (0-based), i.e. (i+1)*h.
    double node(int i) const { return (i + 1) * h; }

    /// x-fastest linear index.
    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(M) * (static_cast<std::size_t>(iy) +
                                              static_cast<std::size_t>(M) * iz);
    }

    bool operator==(const BoxDomain& o) const { return L == o.L && M == o.M; }
    bool operator!=(const BoxDomain& o) const { return !(*this == o); }
};

/// Real scalar samples of u at the interior nodes, x-fastest order.
struct Field {
    BoxDomain domain;
    std::vector<double> values;

    Field() = default;
    explicit Field(const BoxDomain& d) : domain(d), values(d.size(), 0.0) {}

    double& operator()(int ix, int iy, int iz) { return values[domain.index(ix, iy, iz)]; }
    double operator()(int ix, int iy, int iz) const { return values[domain.index(ix, iy, iz)]; }
};

/// Midpoint-rule L^p norm, (h^3 sum |u|^p)^{1/p}; p = infinity gives max|u|.
/// Requires p >= 1 or p = infinity.
double norm(const Field& u, double p);

/// h^3-weighted L^2 inner product over interior nodes.
double inner(const Field& a, const Field& b);

bool all_finite(const Field& u);

/// Sample f(x,y,z) at the interior nodes.
template <class Fn>
Field sample(const BoxDomain& d, Fn&& f) {
    Field u(d);
    std::size_t idx = 0;
    for (int iz = 0; iz < d.M; ++iz)
        for (int iy = 0; iy < d.M; ++iy)
            for (int ix = 0; ix < d.M; ++ix, ++idx)
                u.values[idx] = f(d.node(ix), d.node(iy), d.node(iz));
    return u;
}

/// Product of sines sin(k1 pi x/L) sin(k2 pi y/L) sin(k3 pi z/L), the
/// Dirichlet Laplacian eigenfunction for mode k.
Field eigenmode(const BoxDomain& d, int k1, int k2, int k3);

Field scaled(const Field& u, double c);
Field added(const Field& a, const Field& b);

}  // namespace potwell
