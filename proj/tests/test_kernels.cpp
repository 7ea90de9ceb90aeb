#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpsw/kernels.hpp"

using namespace lpsw;

namespace {

std::vector<double> ramp(std::size_t n, double scale, double shift) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = scale * std::sin(0.7 * i + shift) + 0.01 * (i % 13) - 0.05;
    return v;
}

}  // namespace

TEST_CASE("scalar and AVX2 map kernels agree bitwise") {
    const kernels::Ops& s = kernels::scalar();
    const kernels::Ops* a = kernels::avx2();
    if (a == nullptr) {
        MESSAGE("AVX2 unavailable; scalar-only build");
        return;
    }
    for (std::size_t n : {1ul, 3ul, 4ul, 17ul, 256ul, 1001ul}) {
        auto x = ramp(n, 1.3, 0.2), y = ramp(n, 0.8, 1.1);

        auto y1 = y, y2 = y;
        s.vaxpy(y1.data(), 0.37, x.data(), n);
        a->vaxpy(y2.data(), 0.37, x.data(), n);
        CHECK(y1 == y2);

        std::vector<double> o1(n), o2(n);
        s.vmul(o1.data(), x.data(), y.data(), n);
        a->vmul(o2.data(), x.data(), y.data(), n);
        CHECK(o1 == o2);

        s.vadd(o1.data(), x.data(), y.data(), n);
        a->vadd(o2.data(), x.data(), y.data(), n);
        CHECK(o1 == o2);

        s.vsub(o1.data(), x.data(), y.data(), n);
        a->vsub(o2.data(), x.data(), y.data(), n);
        CHECK(o1 == o2);

        y1 = y;
        y2 = y;
        s.vscale(y1.data(), -1.618, n);
        a->vscale(y2.data(), -1.618, n);
        CHECK(y1 == y2);
    }
}

TEST_CASE("complex-times-table kernel agrees bitwise across paths") {
    const kernels::Ops& s = kernels::scalar();
    const kernels::Ops* a = kernels::avx2();
    if (a == nullptr) return;
    for (std::size_t nc : {1ul, 2ul, 5ul, 128ul, 333ul}) {
        auto c1 = ramp(2 * nc, 1.0, 0.5);
        auto c2 = c1;
        auto t = ramp(nc, 0.9, 2.2);
        s.mul_table(c1.data(), t.data(), nc);
        a->mul_table(c2.data(), t.data(), nc);
        CHECK(c1 == c2);
    }
}

TEST_CASE("reductions agree to rounding between paths") {
    const kernels::Ops& s = kernels::scalar();
    const kernels::Ops* a = kernels::avx2();
    if (a == nullptr) return;
    for (std::size_t n : {7ul, 64ul, 4096ul, 10001ul}) {
        auto x = ramp(n, 2.1, 0.9);
        CHECK(s.sum_abs(x.data(), n) == doctest::Approx(a->sum_abs(x.data(), n)).epsilon(1e-14));
        CHECK(s.sum_sq(x.data(), n) == doctest::Approx(a->sum_sq(x.data(), n)).epsilon(1e-14));
        CHECK(s.sum_p4(x.data(), n) == doctest::Approx(a->sum_p4(x.data(), n)).epsilon(1e-14));
        CHECK(s.max_abs(x.data(), n) == a->max_abs(x.data(), n));  // max is order-free

        auto w = ramp((n + 1) / 2, 0.4, 1.7);
        const std::size_t ncplx = w.size();
        CHECK(s.sum_sq_weighted(x.data(), w.data(), ncplx) ==
              doctest::Approx(a->sum_sq_weighted(x.data(), w.data(), ncplx)).epsilon(1e-14));
    }
}

TEST_CASE("reductions are deterministic across repeated calls") {
    const kernels::Ops& k = kernels::active();
    auto x = ramp(9999, 1.0, 0.0);
    const double r1 = k.sum_sq(x.data(), x.size());
    const double r2 = k.sum_sq(x.data(), x.size());
    CHECK(r1 == r2);
}

TEST_CASE("sum_pow fast paths match the generic loop") {
    auto x = ramp(517, 1.1, 0.3);
    for (double p : {1.0, 2.0, 4.0}) {
        double ref = 0.0;
        for (double v : x) ref += std::pow(std::fabs(v), p);
        CHECK(kernels::sum_pow(x.data(), x.size(), p) == doctest::Approx(ref).epsilon(1e-13));
    }
    // non-integer exponent goes through the scalar path on every build
    double ref = 0.0;
    for (double v : x) ref += std::pow(std::fabs(v), 2.7);
    CHECK(kernels::sum_pow(x.data(), x.size(), 2.7) == doctest::Approx(ref).epsilon(1e-13));
}
