#pragma once

#include <cstddef>

// Edgewise array kernels used by the solver inner loops.  Every operation has
// a scalar reference implementation and (on x86-64) an AVX2 variant selected
// once at startup.  The AVX2 elementwise kernels perform the same sequence of
// rounded operations per lane as the scalar code, so their results are
// bit-identical; reductions may differ in summation order and agree only up
// to roundoff.  set_backend() exists so tests can pin either variant.

namespace adot::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool backend_available(Backend b);
// Returns false (and leaves the dispatch table alone) if b is not available.
bool set_backend(Backend b);
const char* backend_name(Backend b);

// out[i] = (a[i] + b[i]) / 2
void average(const double* a, const double* b, double* out, std::size_t n);

// acc[i] += c * (a[i] - b[i])
void add_scaled_diff(double* acc, const double* a, const double* b, double c,
                     std::size_t n);

// max_i |a[i] - b[i]|   (0 for n == 0)
double max_abs_diff(const double* a, const double* b, std::size_t n);

double dot(const double* a, const double* b, std::size_t n);

// sum_i max(v[i] - tau, 0)
double sum_clamped_shift(const double* v, double tau, std::size_t n);

// out[i] = max(v[i] - tau, 0)
void clamped_shift(const double* v, double tau, double* out, std::size_t n);

double l1_norm(const double* v, std::size_t n);

double sum_squares(const double* v, std::size_t n);

}  // namespace adot::kernels
