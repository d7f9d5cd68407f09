#include "potwell/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "potwell/fft.hpp"

namespace potwell {

double eigenvalue(const BoxDomain& d, int k1, int k2, int k3) {
    const double s = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                     static_cast<double>(k3) * k3;
    return M_PI * M_PI * s / (d.L * d.L);
}

SpectralField dst_forward(const Field& u) {
    SpectralField uh(u.domain);
    fft::dst3(u.domain.M, u.values.data(), uh.coeffs.data());
    // Unnormalized DST-I of samples of sum_k c_k sin-products returns
    // c_k (M+1)^3 by the discrete orthogonality sum (M+1)/2 per axis.
    const double scale = 1.0 / std::pow(u.domain.M + 1.0, 3);
    for (double& c : uh.coeffs) c *= scale;
    return uh;
}

Field dst_inverse(const SpectralField& uh) {
    Field u(uh.domain);
    fft::dst3(uh.domain.M, uh.coeffs.data(), u.values.data());
    for (double& v : u.values) v *= 0.125;  // one factor 2 per axis
    return u;
}

SpectralField laplacian_apply(const SpectralField& uh) {
    SpectralField out(uh.domain);
    const int M = uh.domain.M;
    const double w = M_PI * M_PI / (uh.domain.L * uh.domain.L);
    std::size_t idx = 0;
    for (int kz = 1; kz <= M; ++kz)
        for (int ky = 1; ky <= M; ++ky) {
            const double syz = static_cast<double>(ky) * ky + static_cast<double>(kz) * kz;
            for (int kx = 1; kx <= M; ++kx, ++idx)
                out.coeffs[idx] = -w * (static_cast<double>(kx) * kx + syz) * uh.coeffs[idx];
        }
    return out;
}

SpectralField inverse_laplacian_apply(const SpectralField& uh) {
    SpectralField out(uh.domain);
    const int M = uh.domain.M;
    const double w = M_PI * M_PI / (uh.domain.L * uh.domain.L);
    std::size_t idx = 0;
    for (int kz = 1; kz <= M; ++kz)
        for (int ky = 1; ky <= M; ++ky) {
            const double syz = static_cast<double>(ky) * ky + static_cast<double>(kz) * kz;
            for (int kx = 1; kx <= M; ++kx, ++idx)
                out.coeffs[idx] = uh.coeffs[idx] / (w * (static_cast<double>(kx) * kx + syz));
        }
    return out;
}

double parseval_weight(const BoxDomain& d) {
    const double half = d.L / 2.0;
    return half * half * half;
}

double grad_norm_sq(const SpectralField& uh) {
    const int M = uh.domain.M;
    const double w = M_PI * M_PI / (uh.domain.L * uh.domain.L);
    double s = 0.0;
    std::size_t idx = 0;
    for (int kz = 1; kz <= M; ++kz)
        for (int ky = 1; ky <= M; ++ky) {
            const double syz = static_cast<double>(ky) * ky + static_cast<double>(kz) * kz;
            for (int kx = 1; kx <= M; ++kx, ++idx) {
                const double c = uh.coeffs[idx];
                s += w * (static_cast<double>(kx) * kx + syz) * c * c;
            }
        }
    return parseval_weight(uh.domain) * s;
}

double grad_norm_sq(const Field& u) { return grad_norm_sq(dst_forward(u)); }

double l2_norm_sq(const SpectralField& uh) {
    double s = 0.0;
    for (double c : uh.coeffs) s += c * c;
    return parseval_weight(uh.domain) * s;
}

}  // namespace potwell
