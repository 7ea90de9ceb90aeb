#include "lpsw/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(__i386__)
#define LPSW_X86 1
#include <immintrin.h>
#else
#define LPSW_X86 0
#endif

namespace lpsw::kernels {

#if LPSW_X86

#define LPSW_AVX2 __attribute__((target("avx2")))

namespace {

// Horizontal sum with a fixed lane order: (l0+l2) + (l1+l3).
LPSW_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

LPSW_AVX2 void mul_table_avx2(double* cplx, const double* table, std::size_t ncplx) {
    std::size_t i = 0;
    for (; i + 2 <= ncplx; i += 2) {
        const __m128d t = _mm_loadu_pd(table + i);
        const __m256d tt = _mm256_set_m128d(_mm_unpackhi_pd(t, t), _mm_unpacklo_pd(t, t));
        const __m256d c = _mm256_loadu_pd(cplx + 2 * i);
        _mm256_storeu_pd(cplx + 2 * i, _mm256_mul_pd(c, tt));
    }
    for (; i < ncplx; ++i) {
        cplx[2 * i] *= table[i];
        cplx[2 * i + 1] *= table[i];
    }
}

LPSW_AVX2 void vmul_avx2(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

LPSW_AVX2 void vaxpy_avx2(double* y, double alpha, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_add_pd(_mm256_loadu_pd(y + i),
                                        _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, t);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

LPSW_AVX2 void vscale_avx2(double* y, double alpha, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] *= alpha;
}

LPSW_AVX2 void vadd_avx2(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

LPSW_AVX2 void vsub_avx2(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

LPSW_AVX2 inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

LPSW_AVX2 double sum_abs_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(x[i]);
    return s;
}

LPSW_AVX2 double sum_sq_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

LPSW_AVX2 double sum_p4_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d v2 = _mm256_mul_pd(v, v);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v2, v2));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double x2 = x[i] * x[i];
        s += x2 * x2;
    }
    return s;
}

LPSW_AVX2 double max_abs_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d m2 = _mm_max_pd(lo, hi);
    double m = std::max(_mm_cvtsd_f64(m2), _mm_cvtsd_f64(_mm_unpackhi_pd(m2, m2)));
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

LPSW_AVX2 double sum_sq_weighted_avx2(const double* cplx, const double* w, std::size_t ncplx) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= ncplx; i += 2) {
        const __m256d c = _mm256_loadu_pd(cplx + 2 * i);
        const __m128d t = _mm_loadu_pd(w + i);
        const __m256d tt = _mm256_set_m128d(_mm_unpackhi_pd(t, t), _mm_unpacklo_pd(t, t));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(tt, _mm256_mul_pd(c, c)));
    }
    double s = hsum(acc);
    for (; i < ncplx; ++i) {
        const double re = cplx[2 * i];
        const double im = cplx[2 * i + 1];
        s += w[i] * (re * re + im * im);
    }
    return s;
}

const Ops avx2_ops = {
    "avx2",        mul_table_avx2, vmul_avx2,   vaxpy_avx2,
    vscale_avx2,   vadd_avx2,      vsub_avx2,   sum_abs_avx2,
    sum_sq_avx2,   sum_p4_avx2,    max_abs_avx2, sum_sq_weighted_avx2,
};

}  // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2"); }
const Ops* avx2() { return avx2_available() ? &avx2_ops : nullptr; }

#else  // !LPSW_X86

bool avx2_available() { return false; }
const Ops* avx2() { return nullptr; }

#endif

}  // namespace lpsw::kernels
