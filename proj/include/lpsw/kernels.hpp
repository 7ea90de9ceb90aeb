#pragma once

#include <cstddef>
#include <string>

namespace lpsw::kernels {

// Data-parallel inner loops used by the spectral operators and norms.
// Two implementations exist: a scalar reference path and an AVX2 path.
// The active path is chosen once at startup from CPU capabilities and can
// be overridden with the environment variable LPSW_KERNELS=scalar|avx2.
//
// Map kernels (no reduction) produce bitwise-identical results on both
// paths (the build disables FP contraction). Reductions use a fixed
// accumulation order within each path, so results are deterministic
// across runs for a given path but may differ between paths in the last
// few ulp.
struct Ops {
    const char* name;

    // interleaved complex *= real table, one table entry per complex value
    void (*mul_table)(double* cplx, const double* table, std::size_t ncplx);
    // out[i] = a[i] * b[i]
    void (*vmul)(double* out, const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*vaxpy)(double* y, double alpha, const double* x, std::size_t n);
    // y[i] *= alpha
    void (*vscale)(double* y, double alpha, std::size_t n);
    // out[i] = a[i] + b[i];  out[i] = a[i] - b[i]
    void (*vadd)(double* out, const double* a, const double* b, std::size_t n);
    void (*vsub)(double* out, const double* a, const double* b, std::size_t n);
    // sum_i |x_i|, sum_i x_i^2, sum_i x_i^4, max_i |x_i|
    double (*sum_abs)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    double (*sum_p4)(const double* x, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    // sum_i w_i * (re_i^2 + im_i^2) over interleaved complex data
    double (*sum_sq_weighted)(const double* cplx, const double* w, std::size_t ncplx);
};

// Active kernel table (resolved once, thread-safe).
const Ops& active();

// Named tables for equivalence tests.
const Ops& scalar();
bool avx2_available();
const Ops* avx2();  // nullptr when unsupported

// sum_i |x_i|^p with fast paths for p = 1, 2, 4; general p falls back to
// a scalar std::pow loop on every path.
double sum_pow(const double* x, std::size_t n, double p);

}  // namespace lpsw::kernels
