#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "lpsw/fft.hpp"
#include "lpsw/io.hpp"
#include "lpsw/randfield.hpp"
#include "lpsw/spectral_ops.hpp"
#include "oracles.hpp"

using namespace lpsw;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(8, 1.0), ConfigError);    // too small
    CHECK_THROWS_AS(make_grid(48, 1.0), ConfigError);   // not a power of two
    CHECK_THROWS_AS(make_grid(32, -1.0), ConfigError);  // bad length
    const Grid g = make_grid(32, kTwoPi);
    CHECK(g.spacing() == doctest::Approx(kTwoPi / 32));
    CHECK(g.dk() == doctest::Approx(1.0));
    CHECK(g.nyquist() == doctest::Approx(16.0));
}

TEST_CASE("forward transform matches the direct DFT oracle") {
    const Grid g = make_grid(16, kTwoPi);
    RandomFieldSpec spec;
    spec.seed = 42;
    const Field f = random_field(g, spec);
    const SpectralField F = dft_forward(f);
    const auto ref = oracle::direct_dft(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ref[i] - F.comp(0)[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("constant field concentrates at the zero mode") {
    const Grid g = make_grid(16, 4.0);
    const SpectralField F = dft_forward(constant_field(g, 3.25));
    CHECK(F.comp(0)[0].real() == doctest::Approx(3.25).epsilon(1e-14));
    double off = 0.0;
    for (std::size_t i = 1; i < F.comp(0).size(); ++i) off = std::max(off, std::abs(F.comp(0)[i]));
    CHECK(off < 1e-13);
}

TEST_CASE("cosine mode produces two symmetric coefficients") {
    const Grid g = make_grid(32, kTwoPi * 16);
    const SpectralField F = dft_forward(cosine_mode(g, 1, 0, 1.0));
    CHECK(F.at(0, 1, 0).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(F.at(0, g.n - 1, 0).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(F.at(0, 0, 0)) < 1e-14);
}

TEST_CASE("roundtrip and Parseval for random fields") {
    const Grid g = make_grid(64, kTwoPi);
    for (int trial = 0; trial < 100; ++trial) {
        RandomFieldSpec spec;
        spec.seed = trial_seed(7, trial);
        spec.beta = 2.0;
        const Field f = random_field(g, spec);
        const SpectralField F = dft_forward(f);
        const Field back = dft_inverse(F);
        CHECK(oracle::linf_diff(f, back) < 1e-12 * std::max(1.0, max_abs(f)));

        // Parseval with the grid-quadrature L2 norm
        double sumsq = 0.0;
        for (auto c : F.comp(0)) sumsq += std::norm(c);
        const double spectral_l2 = g.length * std::sqrt(sumsq);
        CHECK(lp_norm(f, 2.0) == doctest::Approx(spectral_l2).epsilon(1e-11));
    }
}

TEST_CASE("real fields have Hermitian spectra") {
    const Grid g = make_grid(32, kTwoPi);
    RandomFieldSpec spec;
    spec.seed = 9;
    const SpectralField F = dft_forward(random_field(g, spec));
    for (int q1 = 0; q1 < g.n; ++q1)
        for (int q2 = 0; q2 < g.n; ++q2) {
            const auto z = F.at(0, q1, q2);
            const auto zc = F.at(0, (g.n - q1) % g.n, (g.n - q2) % g.n);
            CHECK(std::abs(z - std::conj(zc)) < 1e-13);
        }
}

TEST_CASE("spectral derivatives are exact on trigonometric modes") {
    const Grid g = make_grid(32, kTwoPi * 16);
    const double k = g.dk();  // mode (1, 0)
    const Field f = cosine_mode(g, 1, 0, 1.0);  // cos(k x1)

    const Field grad = gradient(f);
    // d/dx1 cos(k x1) = -k sin(k x1)
    double worst = 0.0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            const double x = ix * g.spacing();
            worst = std::max(worst, std::abs(grad.at(0, ix, iy) + k * std::sin(k * x)));
            worst = std::max(worst, std::abs(grad.at(1, ix, iy)));
        }
    CHECK(worst < 1e-13);

    SUBCASE("divergence of gradient equals laplacian") {
        RandomFieldSpec spec;
        spec.seed = 4;
        const Field u = random_field(g, spec);
        const Field lhs = divergence(gradient(u));
        const Field rhs = laplacian(u);
        CHECK(oracle::linf_diff(lhs, rhs) < 1e-11 * std::max(1.0, max_abs(rhs)));
    }

    SUBCASE("laplacian eigenvalue on a single mode") {
        const Field mode = cosine_mode(g, 3, 2, 1.0);
        const double kk = g.dk() * g.dk() * (9.0 + 4.0);
        const Field lap = laplacian(mode);
        Field expected = (-kk) * mode;
        CHECK(oracle::linf_diff(lap, expected) < 1e-12);
    }
}

TEST_CASE("differentiation commutes with translation in spectrum") {
    const Grid g = make_grid(32, kTwoPi);
    RandomFieldSpec spec;
    spec.seed = 31;
    const Field f = random_field(g, spec);
    const SpectralField a = gradient(translate(dft_forward(f), 0.3, -0.7));
    const SpectralField b = translate(gradient(dft_forward(f)), 0.3, -0.7);
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < a.comp(c).size(); ++i)
            worst = std::max(worst, std::abs(a.comp(c)[i] - b.comp(c)[i]));
    CHECK(worst < 1e-13);
}

TEST_CASE("dealiased product basics") {
    const Grid g = make_grid(32, kTwoPi);

    SUBCASE("f times one is f for banded f") {
        RandomFieldSpec spec;
        spec.seed = 5;
        const Field f = random_field(g, spec);  // generated inside the band
        const Field one = constant_field(g, 1.0);
        CHECK(oracle::linf_diff(pointwise_product(f, one), f) < 1e-13);
    }

    SUBCASE("cos * cos has the closed-form double angle") {
        const Field c = cosine_mode(g, 2, 0, 1.0);
        const Field prod = pointwise_product(c, c);
        Field expected = cosine_mode(g, 4, 0, 0.5);
        for (auto& v : expected.comp(0)) v += 0.5;
        CHECK(oracle::linf_diff(prod, expected) < 1e-11);
    }

    SUBCASE("matches the explicit truncated convolution") {
        const Grid gs = make_grid(16, kTwoPi);
        RandomFieldSpec sa, sb;
        sa.seed = 11;
        sb.seed = 12;
        sa.k_max = kInf;
        const Field a = random_field(gs, sa);
        const Field b = random_field(gs, sb);
        const Field prod = pointwise_product(a, b);
        const Field ref = oracle::convolution_product(a, b);
        CHECK(oracle::linf_diff(prod, ref) < 1e-12 * std::max(1.0, max_abs(ref)));
    }

    SUBCASE("symmetric and bilinear") {
        RandomFieldSpec sa, sb, sc;
        sa.seed = 21;
        sb.seed = 22;
        sc.seed = 23;
        const Field a = random_field(g, sa);
        const Field b = random_field(g, sb);
        const Field c = random_field(g, sc);
        CHECK(oracle::linf_diff(pointwise_product(a, b), pointwise_product(b, a)) < 1e-14);
        Field lin = pointwise_product(a + b, c);
        Field sum = pointwise_product(a, c) + pointwise_product(b, c);
        CHECK(oracle::linf_diff(lin, sum) < 1e-13);
    }
}

TEST_CASE("vector product semantics") {
    const Grid g = make_grid(32, kTwoPi);
    RandomFieldSpec sv;
    sv.components = 2;
    sv.seed = 33;
    const Field v = random_field(g, sv);
    const Field dot = pointwise_product(v, v);
    CHECK(dot.components() == 1);
    CHECK(lp_norm(dot, kInf) > 0.0);
    RandomFieldSpec ss;
    ss.seed = 34;
    const Field s = random_field(g, ss);
    CHECK(pointwise_product(s, v).components() == 2);
}

TEST_CASE("grid mismatch is refused") {
    const Field a(make_grid(16, 1.0), 1);
    const Field b(make_grid(32, 1.0), 1);
    CHECK_THROWS_AS(pointwise_product(a, b), ConfigError);
}

TEST_CASE("field container roundtrips") {
    namespace fs = std::filesystem;
    const Grid g = make_grid(16, 2.5);
    RandomFieldSpec spec;
    spec.seed = 77;
    spec.components = 2;
    const Field f = random_field(g, spec);
    const std::string dir = fs::temp_directory_path() / "lpsw_io_test";
    fs::create_directories(dir);

    const std::string bin = dir + "/f.bswf";
    write_field(f, bin, true);
    const Field back = read_field(bin);
    CHECK(back.components() == 2);
    CHECK(back.grid() == f.grid());
    CHECK(oracle::linf_diff(f, back) == 0.0);  // bit-exact container

    const std::string csv = dir + "/f.csv";
    write_field_csv(f, csv, true);
    const Field back_csv = read_field_csv(csv);
    CHECK(oracle::linf_diff(f, back_csv) == 0.0);  // %.17g preserves doubles

    CHECK_THROWS_AS(write_field(f, bin, false), IoError);  // no silent overwrite
    fs::remove_all(dir);
}
