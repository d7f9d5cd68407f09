#pragma once

#include <complex>
#include <memory>

#include "potwell/grid.hpp"

namespace potwell {

/// Precomputed spectrum of the kernel |x|^{-mu} sampled on the doubled
/// (2M)^3 grid, used to evaluate Phi(x) = integral f(y)/|x-y|^mu dy as a
/// zero-padded (linear, non-circular) fast convolution.
///
/// The singular sample at x = 0 is replaced by the equal-volume-ball
/// average: self_cell_weight = (1/h^3) * integral_{B_req} |x|^{-mu} dx with
/// (4/3) pi r_eq^3 = h^3. It scales like h^{-mu}.
struct RieszKernel {
    double mu = 0.0;
    BoxDomain domain;
    std::vector<std::complex<double>> padded_spectrum;  // r2c layout, (M+1) x 2M x 2M
    double self_cell_weight = 0.0;  // regularized kernel sample at offset 0
    double cell_integral = 0.0;     // integral of |x|^{-mu} over the equal-volume ball
};

/// Integral of |x|^{-mu} over the ball of volume h^3 centered at 0:
/// 4 pi r_eq^{3-mu} / (3-mu), r_eq = (3 h^3 / 4 pi)^{1/3}.
double self_cell_integral(double h, double mu);

/// Builds and caches the padded kernel spectrum. Rejects mu outside (0,3).
RieszKernel kernel_build(const BoxDomain& domain, double mu);

/// Memoized kernel_build; safe for concurrent lookups.
std::shared_ptr<const RieszKernel> shared_kernel(const BoxDomain& domain, double mu);

/// Phi(x_i) = h^3 sum_j k_reg(x_i - x_j) f(x_j) by padded fast convolution.
Field riesz_apply(const RieszKernel& kernel, const Field& f);

}  // namespace potwell
