#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Thin wrapper around FFTW. Each thread gets its own plans and scratch
// buffers per grid size (FFTW plan execution is not re-entrant across
// threads on shared buffers); plan creation is serialized globally as FFTW
// requires. Plans use FFTW_ESTIMATE so results are reproducible run to run.
namespace potwell::fft {

/// Honor POTWELL_THREADS (default 1) for FFTW-internal threading.
/// Called lazily on first transform; safe to call repeatedly.
void init_threading();
int thread_count();

/// Unnormalized 3-D DST-I (FFTW RODFT00) on an M^3 array, x-fastest layout:
///   out_k = 8 * sum_j in_j * prod_a sin(pi (j_a+1)(k_a+1) / (M+1)).
/// Applying it twice multiplies by (2(M+1))^3.
void dst3(int M, const double* in, double* out);

/// Number of complex entries of the r2c spectrum of a (2M)^3 real array:
/// (M+1) in x (halved axis), 2M in y and z.
std::size_t padded_spectrum_size(int M);

/// Forward r2c transform of a (2M)^3 real array (x-fastest), unnormalized.
void padded_forward(int M, const double* real_in, std::complex<double>* spec_out);

/// Inverse c2r transform; the caller divides by (2M)^3. Destroys spec_in.
void padded_inverse(int M, std::complex<double>* spec_in, double* real_out);

}  // namespace potwell::fft
