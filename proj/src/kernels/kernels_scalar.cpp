#include "lpsw/kernels.hpp"

#include <cmath>

namespace lpsw::kernels {
namespace {

void mul_table_scalar(double* cplx, const double* table, std::size_t ncplx) {
    for (std::size_t i = 0; i < ncplx; ++i) {
        cplx[2 * i] *= table[i];
        cplx[2 * i + 1] *= table[i];
    }
}

void vmul_scalar(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void vaxpy_scalar(double* y, double alpha, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void vscale_scalar(double* y, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

void vadd_scalar(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void vsub_scalar(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

double sum_abs_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
    return s;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double sum_p4_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x2 = x[i] * x[i];
        s += x2 * x2;
    }
    return s;
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double sum_sq_weighted_scalar(const double* cplx, const double* w, std::size_t ncplx) {
    double s = 0.0;
    for (std::size_t i = 0; i < ncplx; ++i) {
        const double re = cplx[2 * i];
        const double im = cplx[2 * i + 1];
        s += w[i] * (re * re + im * im);
    }
    return s;
}

}  // namespace

const Ops& scalar() {
    static const Ops ops = {
        "scalar",        mul_table_scalar, vmul_scalar,   vaxpy_scalar,
        vscale_scalar,   vadd_scalar,      vsub_scalar,   sum_abs_scalar,
        sum_sq_scalar,   sum_p4_scalar,    max_abs_scalar, sum_sq_weighted_scalar,
    };
    return ops;
}

}  // namespace lpsw::kernels
