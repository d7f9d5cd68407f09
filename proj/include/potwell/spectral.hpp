#pragma once

#include "potwell/grid.hpp"

namespace potwell {

/// Coefficients of a Field in the Dirichlet sine basis
///   u(x) = sum_k c_k prod_a sin(k_a pi x_a / L),  k in {1..M}^3,
/// stored x-fastest like Field (index (kx-1, ky-1, kz-1)).
/// Quadrature norms map to coefficients by the discrete Parseval relation
///   ||u||_2^2 = (L/2)^3 sum_k c_k^2.
struct SpectralField {
    BoxDomain domain;
    std::vector<double> coeffs;

    SpectralField() = default;
    explicit SpectralField(const BoxDomain& d) : domain(d), coeffs(d.size(), 0.0) {}
};

/// Dirichlet Laplacian eigenvalue pi^2 (k1^2+k2^2+k3^2) / L^2 (modes 1-based).
double eigenvalue(const BoxDomain& d, int k1, int k2, int k3);

SpectralField dst_forward(const Field& u);
Field dst_inverse(const SpectralField& uh);

/// Coefficient-wise multiplication by -lambda_k.
SpectralField laplacian_apply(const SpectralField& uh);

/// Coefficient-wise division by lambda_k (inverse Dirichlet Laplacian).
SpectralField inverse_laplacian_apply(const SpectralField& uh);

/// Parseval weight (L/2)^3.
double parseval_weight(const BoxDomain& d);

/// A(u) = integral |grad u|^2, evaluated spectrally: (L/2)^3 sum lambda_k c_k^2.
double grad_norm_sq(const Field& u);
double grad_norm_sq(const SpectralField& uh);

/// ||u||_2^2 from coefficients.
double l2_norm_sq(const SpectralField& uh);

}  // namespace potwell
