#include "potwell/riesz.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "potwell/fft.hpp"

namespace potwell {

double self_cell_integral(double h, double mu) {
    const double r_eq = std::cbrt(3.0 * h * h * h / (4.0 * M_PI));
    return 4.0 * M_PI * std::pow(r_eq, 3.0 - mu) / (3.0 - mu);
}

RieszKernel kernel_build(const BoxDomain& domain, double mu) {
    if (!(mu > 0.0 && mu < 3.0))
        throw std::invalid_argument("kernel_build: mu must lie in (0,3)");

    RieszKernel k;
    k.mu = mu;
    k.domain = domain;
    k.cell_integral = self_cell_integral(domain.h, mu);
    k.self_cell_weight = k.cell_integral / (domain.h * domain.h * domain.h);

    const int M = domain.M;
    const int P = 2 * M;
    const double h = domain.h;

    // Kernel samples on the circular doubled grid; index d encodes offset
    // d for d <= M and d - 2M beyond, so every offset |i-j| <= M-1 of the
    // linear convolution is covered without wrap-around.
    std::vector<double> samples(static_cast<std::size_t>(P) * P * P);
    std::size_t idx = 0;
    for (int dz = 0; dz < P; ++dz) {
        const double oz = (dz <= M ? dz : dz - P) * h;
        for (int dy = 0; dy < P; ++dy) {
            const double oy = (dy <= M ? dy : dy - P) * h;
            for (int dx = 0; dx < P; ++dx, ++idx) {
                const double ox = (dx <= M ? dx : dx - P) * h;
                const double r2 = ox * ox + oy * oy + oz * oz;
                samples[idx] = (r2 == 0.0) ? k.self_cell_weight
                                           : std::pow(r2, -0.5 * mu);
            }
        }
    }

    k.padded_spectrum.resize(fft::padded_spectrum_size(M));
    fft::padded_forward(M, samples.data(), k.padded_spectrum.data());
    return k;
}

std::shared_ptr<const RieszKernel> shared_kernel(const BoxDomain& domain, double mu) {
    struct Key {
        double L, mu;
        int M;
        bool operator<(const Key& o) const {
            if (L != o.L) return L < o.L;
            if (M != o.M) return M < o.M;
            return mu < o.mu;
        }
    };
    static std::mutex mtx;
    static std::map<Key, std::shared_ptr<const RieszKernel>> cache;

    const Key key{domain.L, mu, domain.M};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const RieszKernel>(kernel_build(domain, mu));
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.emplace(key, built);
    return it->second;
}

Field riesz_apply(const RieszKernel& kernel, const Field& f) {
    if (f.domain != kernel.domain)
        throw std::invalid_argument("riesz_apply: field/kernel domain mismatch");

    const int M = f.domain.M;
    const int P = 2 * M;
    const std::size_t p3 = static_cast<std::size_t>(P) * P * P;

    std::vector<double> padded(p3, 0.0);
    for (int iz = 0; iz < M; ++iz)
        for (int iy = 0; iy < M; ++iy) {
            const double* src = f.values.data() + f.domain.index(0, iy, iz);
            double* dst = padded.data() +
                          (static_cast<std::size_t>(iz) * P + iy) * P;
            for (int ix = 0; ix < M; ++ix) dst[ix] = src[ix];
        }

    std::vector<std::complex<double>> spec(fft::padded_spectrum_size(M));
    fft::padded_forward(M, padded.data(), spec.data());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= kernel.padded_spectrum[i];
    fft::padded_inverse(M, spec.data(), padded.data());

    const double h = f.domain.h;
    const double scale = h * h * h / static_cast<double>(p3);  // quadrature and FFT norm
    Field phi(f.domain);
    for (int iz = 0; iz < M; ++iz)
        for (int iy = 0; iy < M; ++iy) {
            const double* src = padded.data() +
                                (static_cast<std::size_t>(iz) * P + iy) * P;
            double* dst = phi.values.data() + phi.domain.index(0, iy, iz);
            for (int ix = 0; ix < M; ++ix) dst[ix] = scale * src[ix];
        }
    return phi;
}

}  // namespace potwell
