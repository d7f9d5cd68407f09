#include <cmath>
#include <stdexcept>
#include <random>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "potwell/riesz.hpp"

using namespace potwell;

TEST_CASE("kernel rejects exponents outside (0,3)") {
    BoxDomain d(1.0, 8);
    CHECK_THROWS_AS(kernel_build(d, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_build(d, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_build(d, -1.0), std::invalid_argument);
}

TEST_CASE("kernel samples: 1/h^2 at the first offset for mu = 2") {
    BoxDomain d(1.0, 9);  // h = 0.1
    REQUIRE(d.h == doctest::Approx(0.1).epsilon(1e-15));
    RieszKernel k = kernel_build(d, 2.0);
    Field delta(d);
    delta(4, 4, 4) = 1.0 / (d.h * d.h * d.h);
    Field phi = riesz_apply(k, delta);
    CHECK(phi(5, 4, 4) == doctest::Approx(100.0).epsilon(1e-11));
}

TEST_CASE("concurrent applies on a shared kernel match the serial result") {
    BoxDomain d(1.0, 8);
    auto k = shared_kernel(d, 2.0);
    std::mt19937_64 rng(77);
    std::vector<Field> inputs;
    for (int i = 0; i < 4; ++i) inputs.push_back(oracles::random_rough(d, rng));

    std::vector<Field> serial;
    for (const Field& f : inputs) serial.push_back(riesz_apply(*k, f));

    std::vector<Field> parallel(4, Field(d));
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i)
        threads.emplace_back([&, i] { parallel[i] = riesz_apply(*k, inputs[i]); });
    for (auto& t : threads) t.join();

    for (int i = 0; i < 4; ++i)
        for (std::size_t m = 0; m < serial[i].values.size(); ++m)
            CHECK(parallel[i].values[m] == serial[i].values[m]);
}

TEST_CASE("self-cell weight matches the Monte-Carlo cell integral within 2%") {
    BoxDomain d(1.0, 8);
    const double mu = 2.0;
    RieszKernel k = kernel_build(d, mu);

    const double r_eq = std::cbrt(3.0 * d.h * d.h * d.h / (4.0 * M_PI));
    CHECK(k.cell_integral == doctest::Approx(4.0 * M_PI * r_eq).epsilon(1e-13));

    const double mc = oracles::cell_integral_mc(d.h, mu, 99, 1000000);
    CHECK(k.cell_integral == doctest::Approx(mc).epsilon(0.02));

    CHECK(k.self_cell_weight == doctest::Approx(k.cell_integral / std::pow(d.h, 3)));
    CHECK(k.self_cell_weight > 0.0);
}

TEST_CASE("self-cell scaling: halving h scales the sample by 2^mu") {
    const double mu = 1.3;
    BoxDomain coarse(1.0, 8), fine(0.5, 8);  // same M, halved spacing
    RieszKernel kc = kernel_build(coarse, mu);
    RieszKernel kf = kernel_build(fine, mu);
    CHECK(kf.self_cell_weight / kc.self_cell_weight ==
          doctest::Approx(std::pow(2.0, mu)).epsilon(1e-12));
    // per-cell integral scales by 2^{mu-3}
    CHECK(kf.cell_integral / kc.cell_integral ==
          doctest::Approx(std::pow(2.0, mu - 3.0)).epsilon(1e-12));
}

TEST_CASE("kernel spectrum is real (even kernel)") {
    BoxDomain d(1.0, 8);
    RieszKernel k = kernel_build(d, 2.0);
    double mag = 0.0, im = 0.0;
    for (const auto& c : k.padded_spectrum) {
        mag = std::max(mag, std::abs(c));
        im = std::max(im, std::abs(c.imag()));
    }
    CHECK(im <= 1e-12 * mag);
}

TEST_CASE("convolution with a discrete delta reproduces the kernel samples") {
    BoxDomain d(1.0, 8);
    const double mu = 1.5;
    RieszKernel k = kernel_build(d, mu);
    const double h = d.h;

    Field delta(d);
    delta(3, 2, 5) = 1.0 / (h * h * h);
    Field phi = riesz_apply(k, delta);

    for (auto [ix, iy, iz] : {std::array<int, 3>{3, 2, 5}, {4, 2, 5}, {0, 0, 0}, {7, 7, 7}}) {
        const double dx = (ix - 3) * h, dy = (iy - 2) * h, dz = (iz - 5) * h;
        const double r2 = dx * dx + dy * dy + dz * dz;
        const double expect =
            r2 == 0.0 ? k.self_cell_weight : std::pow(r2, -0.5 * mu);
        CHECK(phi(ix, iy, iz) == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("convolution is linear") {
    BoxDomain d(1.0, 8);
    RieszKernel k = kernel_build(d, 2.0);
    std::mt19937_64 rng(21);
    Field f = oracles::random_rough(d, rng);
    Field lhs = riesz_apply(k, scaled(f, 3.7));
    Field rhs = scaled(riesz_apply(k, f), 3.7);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        worst = std::max(worst, std::abs(lhs.values[i] - rhs.values[i]));
        scale = std::max(scale, std::abs(rhs.values[i]));
    }
    CHECK(worst <= 1e-13 * scale);
}

TEST_CASE("fast convolution matches the direct double sum on a 6^3 grid") {
    BoxDomain d(1.0, 6);
    for (double mu : {0.8, 2.0, 2.6}) {
        RieszKernel k = kernel_build(d, mu);
        std::mt19937_64 rng(31 + static_cast<int>(10 * mu));
        Field f = oracles::random_rough(d, rng);
        Field fast = riesz_apply(k, f);
        Field direct = oracles::riesz_direct(f, mu);
        double scale = 0.0;
        for (double v : direct.values) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < fast.values.size(); ++i)
            CHECK(std::abs(fast.values[i] - direct.values[i]) <= 1e-10 * scale);
    }
}

TEST_CASE("induced bilinear form is symmetric and positive") {
    BoxDomain d(1.0, 8);
    RieszKernel k = kernel_build(d, 2.0);
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        Field f = oracles::random_rough(d, rng);
        Field g = oracles::random_rough(d, rng);
        const double dfg = inner(f, riesz_apply(k, g));
        const double dgf = inner(g, riesz_apply(k, f));
        CHECK(std::abs(dfg - dgf) <= 1e-10 * std::abs(dfg));
    }
    Field pos(d);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& v : pos.values) v = unif(rng);
    CHECK(inner(pos, riesz_apply(k, pos)) > 0.0);
}

TEST_CASE("zero padding: corner-supported source, exact value at the far corner") {
    BoxDomain d(1.0, 8);
    const double mu = 2.0;
    RieszKernel k = kernel_build(d, mu);
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Field f(d);
    for (int iz = 0; iz < 4; ++iz)
        for (int iy = 0; iy < 4; ++iy)
            for (int ix = 0; ix < 4; ++ix) f(ix, iy, iz) = unif(rng);

    Field phi = riesz_apply(k, f);
    const int e = d.M - 1;
    double direct = 0.0;
    for (int iz = 0; iz < 4; ++iz)
        for (int iy = 0; iy < 4; ++iy)
            for (int ix = 0; ix < 4; ++ix) {
                const double dx = (e - ix) * d.h, dy = (e - iy) * d.h, dz = (e - iz) * d.h;
                direct += std::pow(dx * dx + dy * dy + dz * dz, -0.5 * mu) * f(ix, iy, iz);
            }
    direct *= d.h * d.h * d.h;
    CHECK(phi(e, e, e) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("shared kernel cache returns the same object") {
    BoxDomain d(1.0, 8);
    auto k1 = shared_kernel(d, 2.0);
    auto k2 = shared_kernel(d, 2.0);
    CHECK(k1.get() == k2.get());
    auto k3 = shared_kernel(d, 1.0);
    CHECK(k1.get() != k3.get());
}
