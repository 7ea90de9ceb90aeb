#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lpsw/fft.hpp"
#include "lpsw/randfield.hpp"
#include "lpsw/spectral_ops.hpp"
#include "oracles.hpp"

using namespace lpsw;

namespace {
const Grid g = make_grid(32, kTwoPi);  // dk = 1, lattice corner ~ 22.6
const DyadicPartition part = build_partition(g);
}  // namespace

TEST_CASE("radial profiles have the required shape") {
    CHECK(chi_profile(0.0) == 1.0);
    CHECK(chi_profile(1.0) == 1.0);
    CHECK(chi_profile(4.0 / 3.0) == 0.0);
    CHECK(chi_profile(2.0) == 0.0);
    for (double rho = 0.0; rho <= 4.0; rho += 0.01) {
        CHECK(chi_profile(rho) >= 0.0);
        CHECK(chi_profile(rho) <= 1.0);
        CHECK(phi_profile(rho) >= 0.0);
        CHECK(phi_profile(rho) <= 1.0);
        if (rho <= 1.0 || rho >= 8.0 / 3.0) CHECK(phi_profile(rho) == 0.0);
    }
    // telescoping: chi(rho) + sum_j phi(2^-j rho) == chi(2^-(J+1) rho)
    for (double rho : {0.3, 0.9, 1.1, 1.5, 2.7, 5.0, 20.0}) {
        double sum = chi_profile(rho);
        for (int j = 0; j <= 6; ++j) sum += phi_profile(rho * std::ldexp(1.0, -j));
        CHECK(sum == doctest::Approx(chi_profile(rho * std::ldexp(1.0, -7))).epsilon(1e-14));
    }
}

TEST_CASE("build_partition selects the top block from the lattice corner") {
    CHECK(part.j_max() == 4);  // floor(log2(22.6 / (4/3)))
    CHECK_THROWS_AS(build_partition(make_grid(16, kTwoPi * 16)), ConfigError);  // too coarse
    CHECK_THROWS_AS(build_partition(g, 7), ConfigError);  // beyond lattice maximum
    const DyadicPartition small = build_partition(g, 2);
    CHECK(small.j_max() == 2);
}

TEST_CASE("partition of unity holds at every lattice point") {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double sum = part.block_table(-1)[i];
        for (int j = 0; j <= part.j_max(); ++j) sum += part.block_table(j)[i];
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    CHECK(worst < 1e-12);
    CHECK(part.block_table(-1)[0] == 1.0);  // chi(0) = 1
}

TEST_CASE("annulus supports of non-adjacent blocks are disjoint") {
    for (int j = 0; j + 2 <= part.j_max(); ++j)
        for (int jp = j + 2; jp <= part.j_max(); ++jp) {
            double worst = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
                worst = std::max(worst, part.block_table(j)[i] * part.block_table(jp)[i]);
            CHECK(worst == 0.0);
        }
    // the ball only meets blocks j <= 1
    for (int j = 2; j <= part.j_max(); ++j) {
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, part.block_table(-1)[i] * part.block_table(j)[i]);
        CHECK(worst == 0.0);
    }
}

TEST_CASE("square sums stay within [1/2, 1]") {
    double lo = 2.0, hi = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double sum = part.block_table(-1)[i] * part.block_table(-1)[i];
        for (int j = 0; j <= part.j_max(); ++j)
            sum += part.block_table(j)[i] * part.block_table(j)[i];
        lo = std::min(lo, sum);
        hi = std::max(hi, sum);
    }
    CHECK(lo >= 0.5 - 1e-12);
    CHECK(hi <= 1.0 + 1e-12);
}

TEST_CASE("blocks against the per-definition oracle") {
    const Grid gs = make_grid(16, kTwoPi);
    const DyadicPartition ps = build_partition(gs);
    RandomFieldSpec spec;
    spec.seed = 3;
    const Field f = random_field(gs, spec, &ps);
    for (int j = -1; j <= ps.j_max(); ++j) {
        const Field mine = dyadic_block(ps, j, f);
        const Field ref = oracle::definition_block(gs, j, f);
        CHECK(oracle::linf_diff(mine, ref) < 1e-12 * std::max(1.0, max_abs(f)));
    }
}

TEST_CASE("block conventions and reconstruction") {
    RandomFieldSpec spec;
    spec.seed = 8;
    const Field f = random_field(g, spec, &part);

    SUBCASE("Delta_j is zero for j <= -2") {
        CHECK(max_abs(dyadic_block(part, -2, f)) == 0.0);
        CHECK(max_abs(dft_inverse(dyadic_block(part, -3, dft_forward(f)))) == 0.0);
    }

    SUBCASE("Delta_{-1} preserves constants") {
        const Field c = constant_field(g, 2.5);
        CHECK(oracle::linf_diff(dyadic_block(part, -1, c), c) < 1e-13);
    }

    SUBCASE("blocks sum back to the field") {
        Field sum(g, 1);
        for (int j = -1; j <= part.j_max(); ++j) sum += dyadic_block(part, j, f);
        CHECK(lp_norm(sum - f, 2.0) < 1e-10 * lp_norm(f, 2.0));
    }

    SUBCASE("almost orthogonality") {
        for (int j = -1; j <= part.j_max(); ++j)
            for (int jp = j + 2; jp <= part.j_max(); ++jp) {
                const Field twice = dyadic_block(part, j, dyadic_block(part, jp, f));
                CHECK(max_abs(twice) < 1e-13 * std::max(1.0, max_abs(f)));
            }
    }

    SUBCASE("block application does not expand the L2 norm") {
        for (int j = -1; j <= part.j_max(); ++j)
            CHECK(lp_norm(dyadic_block(part, j, f), 2.0) <= lp_norm(f, 2.0) * (1.0 + 1e-13));
    }

    SUBCASE("out-of-range block index") {
        CHECK_THROWS_AS(dyadic_block(part, part.j_max() + 1, f), PreconditionError);
    }
}

TEST_CASE("low-frequency cutoff") {
    RandomFieldSpec spec;
    spec.seed = 12;
    const Field f = random_field(g, spec, &part);

    SUBCASE("matches the definition sum") {
        const Grid gs = make_grid(16, kTwoPi);
        const DyadicPartition ps = build_partition(gs);
        RandomFieldSpec sp;
        sp.seed = 14;
        const Field fs = random_field(gs, sp, &ps);
        for (int j = 0; j <= ps.j_max() + 2; ++j) {
            const Field mine = low_freq_cutoff(ps, j, fs);
            const Field ref = oracle::definition_cutoff(gs, ps.j_max(), j, fs);
            CHECK(oracle::linf_diff(mine, ref) < 1e-12 * std::max(1.0, max_abs(fs)));
        }
    }

    SUBCASE("S_0 equals the ball block and S_1 preserves constants") {
        CHECK(oracle::linf_diff(low_freq_cutoff(part, 0, f), dyadic_block(part, -1, f)) < 1e-13);
        const Field c = constant_field(g, -1.25);
        CHECK(oracle::linf_diff(low_freq_cutoff(part, 1, c), c) < 1e-13);
    }

    SUBCASE("full cutoff reproduces the field") {
        CHECK(lp_norm(low_freq_cutoff(part, part.j_max() + 2, f) - f, 2.0) <
              1e-10 * lp_norm(f, 2.0));
    }

    SUBCASE("S_j has no spectral mass on the annulus of block j+1") {
        for (int j = 0; j + 1 <= part.j_max(); ++j) {
            const SpectralField cut = low_freq_cutoff(part, j, dft_forward(f));
            const SpectralField blocked = dyadic_block(part, j + 1, cut);
            double mass = 0.0;
            for (auto z : blocked.comp(0)) mass = std::max(mass, std::abs(z));
            // only the overlap of phi_{j+1} with the cutoff edge survives;
            // for our tables  chi(2^-j k) phi(2^{-(j+1)} k) == 0 identically
            CHECK(mass < 1e-13 * std::max(1.0, max_abs(f)));
        }
    }

    SUBCASE("negative index refused") {
        CHECK_THROWS_AS(low_freq_cutoff(part, -1, f), PreconditionError);
    }
}

TEST_CASE("Bony operators") {
    RandomFieldSpec su, sv;
    su.seed = 100;
    sv.seed = 101;
    const Field u = random_field(g, su, &part);
    const Field v = random_field(g, sv, &part);
    const Field zero(g, 1);

    SUBCASE("zero annihilators") {
        CHECK(max_abs(paraproduct(part, u, zero)) == 0.0);
        CHECK(max_abs(paraproduct(part, zero, v)) == 0.0);
        CHECK(max_abs(remainder(part, u, zero)) == 0.0);
    }

    SUBCASE("remainder is symmetric") {
        CHECK(oracle::linf_diff(remainder(part, u, v), remainder(part, v, u)) <
              1e-12 * std::max(1.0, max_abs(u) * max_abs(v)));
    }

    SUBCASE("paraproduct matches the definitional sum with oracle blocks") {
        const Grid gs = make_grid(16, kTwoPi);
        const DyadicPartition ps = build_partition(gs);
        RandomFieldSpec sa, sb;
        sa.seed = 102;
        sb.seed = 103;
        const Field a = random_field(gs, sa, &ps);
        const Field b = random_field(gs, sb, &ps);
        Field ref(gs, 1);
        for (int j = 1; j <= ps.j_max(); ++j) {
            const Field lo = oracle::definition_cutoff(gs, ps.j_max(), j - 1, a);
            const Field blk = oracle::definition_block(gs, j, b);
            ref += pointwise_product(lo, blk);
        }
        CHECK(oracle::linf_diff(paraproduct(ps, a, b), ref) < 1e-12);
    }

    SUBCASE("Bony decomposition reconstructs the product") {
        for (int trial = 0; trial < 100; ++trial) {
            RandomFieldSpec sa, sb;
            sa.seed = trial_seed(500, trial);
            sb.seed = trial_seed(501, trial);
            const Field a = random_field(g, sa, &part);
            const Field b = random_field(g, sb, &part);
            Field bony = paraproduct(part, a, b) + paraproduct(part, b, a);
            bony += remainder(part, a, b);
            const Field prod = pointwise_product(a, b);
            CHECK(lp_norm(bony - prod, 2.0) <= 1e-10 * std::max(1e-30, lp_norm(prod, 2.0)));
        }
    }
}
