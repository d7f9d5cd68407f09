#include "potwell/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace potwell::fft {

namespace {

// FFTW planner functions are not thread-safe; serialize them.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int resolve_thread_count() {
    const char* env = std::getenv("POTWELL_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

int g_threads = 0;

struct FftwDeleter {
    void operator()(double* p) const { fftw_free(p); }
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

// Plans and aligned scratch for one grid size, owned per thread.
struct Workspace {
    int M;
    int P;  // 2M
    std::unique_ptr<double, FftwDeleter> dst_in, dst_out;
    std::unique_ptr<double, FftwDeleter> pad_real;
    std::unique_ptr<fftw_complex, FftwDeleter> pad_spec;
    fftw_plan dst_plan = nullptr;
    fftw_plan r2c_plan = nullptr;
    fftw_plan c2r_plan = nullptr;

    explicit Workspace(int M_) : M(M_), P(2 * M_) {
        const std::size_t n3 = static_cast<std::size_t>(M) * M * M;
        const std::size_t p3 = static_cast<std::size_t>(P) * P * P;
        const std::size_t s3 = static_cast<std::size_t>(P) * P * (M + 1);
        dst_in.reset(fftw_alloc_real(n3));
        dst_out.reset(fftw_alloc_real(n3));
        pad_real.reset(fftw_alloc_real(p3));
        pad_spec.reset(fftw_alloc_complex(s3));
        if (!dst_in || !dst_out || !pad_real || !pad_spec)
            throw std::bad_alloc();

        std::lock_guard<std::mutex> lock(planner_mutex());
#ifdef POTWELL_HAVE_FFTW_THREADS
        fftw_plan_with_nthreads(g_threads);
#endif
        dst_plan = fftw_plan_r2r_3d(M, M, M, dst_in.get(), dst_out.get(),
                                    FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00,
                                    FFTW_ESTIMATE);
        r2c_plan = fftw_plan_dft_r2c_3d(P, P, P, pad_real.get(), pad_spec.get(),
                                        FFTW_ESTIMATE);
        c2r_plan = fftw_plan_dft_c2r_3d(P, P, P, pad_spec.get(), pad_real.get(),
                                        FFTW_ESTIMATE);
        if (!dst_plan || !r2c_plan || !c2r_plan)
            throw std::runtime_error("fftw plan creation failed");
    }

    ~Workspace() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (dst_plan) fftw_destroy_plan(dst_plan);
        if (r2c_plan) fftw_destroy_plan(r2c_plan);
        if (c2r_plan) fftw_destroy_plan(c2r_plan);
    }

    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
};

Workspace& workspace(int M) {
    thread_local std::map<int, std::unique_ptr<Workspace>> cache;
    auto it = cache.find(M);
    if (it == cache.end()) {
        init_threading();
        it = cache.emplace(M, std::make_unique<Workspace>(M)).first;
    }
    return *it->second;
}

}  // namespace

void init_threading() {
    static std::once_flag once;
    std::call_once(once, [] {
        g_threads = resolve_thread_count();
#ifdef POTWELL_HAVE_FFTW_THREADS
        if (g_threads > 1) fftw_init_threads();
#else
        g_threads = 1;
#endif
    });
}

int thread_count() {
    init_threading();
    return g_threads;
}

void dst3(int M, const double* in, double* out) {
    Workspace& ws = workspace(M);
    const std::size_t n3 = static_cast<std::size_t>(M) * M * M;
    std::memcpy(ws.dst_in.get(), in, n3 * sizeof(double));
    fftw_execute(ws.dst_plan);
    std::memcpy(out, ws.dst_out.get(), n3 * sizeof(double));
}

std::size_t padded_spectrum_size(int M) {
    const int P = 2 * M;
    return static_cast<std::size_t>(P) * P * (M + 1);
}

void padded_forward(int M, const double* real_in, std::complex<double>* spec_out) {
    Workspace& ws = workspace(M);
    const std::size_t p3 = static_cast<std::size_t>(ws.P) * ws.P * ws.P;
    std::memcpy(ws.pad_real.get(), real_in, p3 * sizeof(double));
    fftw_execute(ws.r2c_plan);
    // std::complex<double> is layout-compatible with fftw_complex
    std::memcpy(static_cast<void*>(spec_out), static_cast<const void*>(ws.pad_spec.get()),
                padded_spectrum_size(M) * sizeof(fftw_complex));
}

void padded_inverse(int M, std::complex<double>* spec_in, double* real_out) {
    Workspace& ws = workspace(M);
    const std::size_t p3 = static_cast<std::size_t>(ws.P) * ws.P * ws.P;
    std::memcpy(static_cast<void*>(ws.pad_spec.get()), static_cast<const void*>(spec_in),
                padded_spectrum_size(M) * sizeof(fftw_complex));
    fftw_execute(ws.c2r_plan);
    std::memcpy(real_out, ws.pad_real.get(), p3 * sizeof(double));
}

}  // namespace potwell::fft
