#include "lpsw/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace lpsw::kernels {

namespace {

const Ops& resolve() {
    const char* env = std::getenv("LPSW_KERNELS");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return scalar();
        if (std::strcmp(env, "avx2") == 0 && avx2() != nullptr) return *avx2();
    }
    if (const Ops* a = avx2()) return *a;
    return scalar();
}

}  // namespace

const Ops& active() {
    static const Ops& ops = resolve();
    return ops;
}

double sum_pow(const double* x, std::size_t n, double p) {
    const Ops& k = active();
    if (p == 1.0) return k.sum_abs(x, n);
    if (p == 2.0) return k.sum_sq(x, n);
    if (p == 4.0) return k.sum_p4(x, n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(x[i]), p);
    return s;
}

}  // namespace lpsw::kernels
